#!/usr/bin/env python3
"""
Installation script for Commlink
Checks the interpreter, installs the package, verifies the numeric stack
and optionally runs a smoke test and the test suite
"""

import subprocess
import sys
import tempfile
from pathlib import Path

MIN_PYTHON = (3, 9)

# import name -> distribution name
MODULES = {
    'numpy': 'numpy',
    'scipy': 'scipy',
    'networkx': 'networkx',
    'sklearn': 'scikit-learn',
    'tqdm': 'tqdm',
    'PIL': 'Pillow',
}


def pip(*args):
    return subprocess.run([sys.executable, "-m", "pip", *args], capture_output=True, text=True)


def ask(question):
    return input(f"{question} (y/n): ").lower().strip() in ('y', 'yes')


def print_header():
    print("🔗 Commlink - Installation Script")
    print("=" * 50)
    print("Sets up the community-aware link prediction toolkit.")
    print()


def check_python_version():
    print("🐍 Checking Python version...")
    if sys.version_info[:2] < MIN_PYTHON:
        wanted = '.'.join(map(str, MIN_PYTHON))
        print(f"❌ Python {sys.version.split()[0]} is too old; {wanted}+ is required.")
        return False
    print(f"✅ Python {sys.version.split()[0]}")
    return True


def check_pip():
    print("\n📦 Checking pip...")
    result = pip("--version")
    if result.returncode != 0:
        print("❌ pip is not available for this interpreter.")
        return False
    print(f"✅ {result.stdout.strip()}")
    return True


def install_package(editable=True):
    """Install requirements, then the package itself.

    An editable install also pulls the development requirements (pytest).
    """
    requirements = "requirements-dev.txt" if editable else "requirements.txt"
    if not Path(requirements).is_file():
        print(f"❌ {requirements} not found; run this script from the repository root.")
        return False

    print(f"\n📥 Installing {requirements}...")
    result = pip("install", "-r", requirements)
    if result.returncode != 0:
        print("❌ Requirement installation failed:")
        print(result.stderr)
        return False

    print("📥 Installing commlink...")
    result = pip("install", "-e", ".") if editable else pip("install", ".")
    if result.returncode != 0:
        print("❌ Package installation failed:")
        print(result.stderr)
        return False
    print("✅ Installed; the `commlink` command is now available.")
    return True


def check_numeric_stack():
    print("\n🧮 Checking the numeric stack...")
    missing = []
    for module, dist in MODULES.items():
        try:
            version = getattr(__import__(module), '__version__', '?')
            print(f"✅ {dist} {version}")
        except ImportError:
            print(f"⚠️ {dist} is missing")
            missing.append(dist)
    if missing:
        print(f"   Install with: pip install {' '.join(missing)}")
    return not missing


def smoke_test():
    """Generate a tiny block graph and run the structural pipeline on it"""
    print("\n💨 Running a smoke test...")
    with tempfile.TemporaryDirectory() as tmp:
        edges = Path(tmp) / "sbm.tsv"
        steps = [
            ["synth", "sbm", "--sizes", "20,20", "--p-in", "0.3", "--p-out", "0.02",
             "--out-edges", str(edges), "--quiet"],
            ["run", "--edges", str(edges), "--directed", "false", "--ablation", "structural-only",
             "--struct-dim", "8", "--walks-per-node", "2", "--walk-length", "10",
             "--output-dir", str(Path(tmp) / "out"), "--quiet"],
        ]
        for args in steps:
            result = subprocess.run([sys.executable, "main.py", *args],
                                    capture_output=True, text=True)
            if result.returncode != 0:
                print(f"❌ `{args[0]}` failed:")
                print(result.stderr)
                return False
        report = (Path(tmp) / "out" / "report.txt").read_text(encoding="utf-8")
        line = next(l for l in report.splitlines() if l.startswith("auc.embedding="))
        print(f"✅ Pipeline ran end to end ({line})")
    return True


def run_tests():
    print("\n🧪 Running pytest...")
    try:
        __import__("pytest")
    except ImportError:
        print("⚠️ pytest is missing. Install with: pip install -r requirements-dev.txt")
        return False
    result = subprocess.run([sys.executable, "-m", "pytest", "-q"], capture_output=True, text=True)
    tail = result.stdout.strip().splitlines()[-1:] or ["(no output)"]
    print(("✅ " if result.returncode == 0 else "❌ ") + tail[0])
    return result.returncode == 0


def print_instructions():
    print("\n" + "=" * 50)
    print("🎉 Setup finished!")
    print()
    print("Next steps:")
    print("  commlink synth attributed --out-edges graph.tsv --out-content posts.jsonl")
    print("  commlink run --edges graph.tsv --content posts.jsonl --directed false")
    print()
    print("See README.md for the config keys and every subcommand.")


def main():
    print_header()

    if not (check_python_version() and check_pip()):
        return False

    if ask("📥 Install requirements and the package now?"):
        if not install_package(editable=ask("🛠️ Editable (development) install?")):
            return False
    else:
        print("⚠️ Skipped. Later: pip install -r requirements.txt && pip install -e .")

    if not check_numeric_stack():
        return False

    if ask("💨 Run a quick smoke test?"):
        smoke_test()

    if ask("🧪 Run the full test suite?"):
        run_tests()

    print_instructions()
    return True


if __name__ == "__main__":
    try:
        ok = main()
    except KeyboardInterrupt:
        print("\n\n👋 Installation cancelled.")
        ok = False
    sys.exit(0 if ok else 1)
