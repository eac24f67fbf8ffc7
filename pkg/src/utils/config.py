"""
Config - Pipeline settings, flat key=value config files and CLI overrides
"""

import logging
from dataclasses import dataclass, field, replace
from pathlib import Path

from src.embedding.base_embedder import TrainConfig
from src.graph.walker import WalkParams
from src.prediction.features import AblationMode
from src.utils.errors import ConfigError

logger = logging.getLogger(__name__)

SPLIT_MODES = ('random', 'temporal')
AUC_MODES = ('exact', 'sampled')


@dataclass(frozen=True)
class SplitSettings:
    mode: str = 'random'
    test_fraction: float = 0.1
    drop_unseen: bool = False

    def __post_init__(self):
        if self.mode not in SPLIT_MODES:
            raise ConfigError(f"split mode must be one of {SPLIT_MODES}, got {self.mode!r}")
        if not 0.0 < self.test_fraction < 1.0:
            raise ConfigError(f"test fraction must be in (0, 1), got {self.test_fraction}")


@dataclass(frozen=True)
class ClassifierSettings:
    lr: float = 0.1
    epochs: int = 300
    l2: float = 1e-4
    batch_size: int = 64  # 0 = full batch
    standardize: bool = True

    def __post_init__(self):
        if not self.lr > 0:
            raise ConfigError(f"classifier learning rate must be positive, got {self.lr}")
        if self.epochs < 1:
            raise ConfigError(f"classifier epochs must be >= 1, got {self.epochs}")
        if self.l2 < 0:
            raise ConfigError(f"L2 penalty must be >= 0, got {self.l2}")
        if self.batch_size < 0:
            raise ConfigError(f"batch size must be >= 0, got {self.batch_size}")


@dataclass
class PipelineConfig:
    """Everything a pipeline run needs. `seed` and `threads` are pushed down
    into the nested walk and training settings."""
    edges: str = None
    edges_t2: str = None
    content: str = None
    output_dir: str = 'output'
    communities_file: str = None
    structural_file: str = None
    directed: bool = True
    walk: WalkParams = field(default_factory=WalkParams)
    structural: TrainConfig = field(default_factory=lambda: TrainConfig(dim=100, window=10))
    content_train: TrainConfig = field(
        default_factory=lambda: TrainConfig(dim=100, window=5, min_count=2))
    split: SplitSettings = field(default_factory=SplitSettings)
    classifier: ClassifierSettings = field(default_factory=ClassifierSettings)
    ablation: AblationMode = AblationMode.BOTH
    seed: int = 42
    threads: int = 1
    auc_mode: str = 'exact'
    auc_samples: int = 100_000
    quiet: bool = False
    resume: bool = False

    def __post_init__(self):
        try:
            self.ablation = AblationMode.parse(self.ablation)
        except ValueError as e:
            raise ConfigError(str(e)) from None
        if self.auc_mode not in AUC_MODES:
            raise ConfigError(f"AUC mode must be one of {AUC_MODES}, got {self.auc_mode!r}")
        if self.auc_samples < 1:
            raise ConfigError(f"AUC samples must be >= 1, got {self.auc_samples}")
        if self.seed < 0:
            raise ConfigError(f"seed must be >= 0, got {self.seed}")
        if self.threads < 1:
            raise ConfigError(f"threads must be >= 1, got {self.threads}")
        self.walk = replace(self.walk, seed=self.seed)
        self.structural = replace(self.structural, seed=self.seed, threads=self.threads)
        self.content_train = replace(self.content_train, seed=self.seed, threads=self.threads)

    @property
    def deterministic(self):
        return self.threads == 1

    def with_overrides(self, values):
        """New config with flat keys applied; `None` values are ignored"""
        top = {}
        nested = {}
        for key, raw in values.items():
            if raw is None:
                continue
            if key not in FLAT_KEYS:
                raise ConfigError(f"unknown config key {key!r}")
            section, name, parse = FLAT_KEYS[key]
            value = parse(raw) if isinstance(raw, str) else raw
            if section is None:
                top[name] = value
            else:
                nested.setdefault(section, {})[name] = value
        for section, changes in nested.items():
            try:
                top[section] = replace(getattr(self, section), **changes)
            except (TypeError, ValueError) as e:
                raise ConfigError(f"invalid {section} settings: {e}") from None
        return replace(self, **top)

    def to_flat(self):
        """Every flat key with its resolved value, formatted for reports"""
        flat = {}
        for key, (section, name, _) in FLAT_KEYS.items():
            owner = self if section is None else getattr(self, section)
            flat[key] = _format(getattr(owner, name))
        return flat

    def require_inputs(self):
        """Check that the input files the run needs are configured"""
        if self.edges is None:
            raise ConfigError("no edge list given (edges=...)")
        if self.split.mode == 'temporal' and self.edges_t2 is None:
            raise ConfigError("temporal split needs a second snapshot (edges_t2=...)")
        for key in ('edges', 'edges_t2', 'content', 'communities_file', 'structural_file'):
            path = getattr(self, key)
            if path is not None and not Path(path).is_file():
                raise ConfigError(f"{key}: file not found: {path}")


def _parse_bool(raw):
    lowered = raw.strip().lower()
    if lowered in ('1', 'true', 'yes', 'on'):
        return True
    if lowered in ('0', 'false', 'no', 'off'):
        return False
    raise ConfigError(f"expected a boolean, got {raw!r}")


def _typed(kind):
    def parse(raw):
        try:
            return kind(raw.strip())
        except ValueError:
            raise ConfigError(f"expected {kind.__name__}, got {raw!r}") from None
    return parse


def _optional_path(raw):
    raw = raw.strip()
    return None if raw.lower() in ('', 'none') else raw


def _format(value):
    if value is None:
        return 'none'
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, AblationMode):
        return value.value
    if isinstance(value, float):
        return repr(value)
    return str(value)


_int = _typed(int)
_float = _typed(float)
_str = _typed(str)

# flat key -> (nested section or None, field name, parser)
FLAT_KEYS = {
    'edges': (None, 'edges', _optional_path),
    'edges_t2': (None, 'edges_t2', _optional_path),
    'content': (None, 'content', _optional_path),
    'output_dir': (None, 'output_dir', _str),
    'communities_file': (None, 'communities_file', _optional_path),
    'structural_file': (None, 'structural_file', _optional_path),
    'directed': (None, 'directed', _parse_bool),
    'alpha': ('walk', 'alpha', _float),
    'walk_length': ('walk', 'max_length', _int),
    'walks_per_node': ('walk', 'walks_per_node', _int),
    'struct_dim': ('structural', 'dim', _int),
    'struct_window': ('structural', 'window', _int),
    'struct_epochs': ('structural', 'epochs', _int),
    'struct_negatives': ('structural', 'negatives', _int),
    'struct_lr': ('structural', 'initial_lr', _float),
    'struct_final_lr': ('structural', 'final_lr', _float),
    'content_dim': ('content_train', 'dim', _int),
    'content_window': ('content_train', 'window', _int),
    'content_epochs': ('content_train', 'epochs', _int),
    'content_negatives': ('content_train', 'negatives', _int),
    'content_lr': ('content_train', 'initial_lr', _float),
    'content_final_lr': ('content_train', 'final_lr', _float),
    'content_min_count': ('content_train', 'min_count', _int),
    'split_mode': ('split', 'mode', _str),
    'test_fraction': ('split', 'test_fraction', _float),
    'drop_unseen': ('split', 'drop_unseen', _parse_bool),
    'classifier_lr': ('classifier', 'lr', _float),
    'classifier_epochs': ('classifier', 'epochs', _int),
    'classifier_l2': ('classifier', 'l2', _float),
    'classifier_batch_size': ('classifier', 'batch_size', _int),
    'standardize': ('classifier', 'standardize', _parse_bool),
    'ablation': (None, 'ablation', _str),
    'seed': (None, 'seed', _int),
    'threads': (None, 'threads', _int),
    'auc_mode': (None, 'auc_mode', _str),
    'auc_samples': (None, 'auc_samples', _int),
}


def parse_config_lines(lines, source='<config>'):
    """`key = value` lines into a dict; `#` comments and blank lines skipped"""
    values = {}
    for line_number, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith('#'):
            continue
        key, sep, value = line.partition('=')
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"{source}:{line_number}: expected 'key = value', got {line!r}")
        if key not in FLAT_KEYS:
            raise ConfigError(f"{source}:{line_number}: unknown config key {key!r}")
        values[key] = value.strip()
    return values


def load_config(path=None, overrides=None):
    """Defaults, then the config file, then CLI overrides"""
    cfg = PipelineConfig()
    if path is not None:
        try:
            with open(path, 'r', encoding='utf-8') as f:
                values = parse_config_lines(f, source=str(path))
        except OSError as e:
            raise ConfigError(f"cannot read config file {path}: {e.strerror}") from None
        cfg = cfg.with_overrides(values)
        logger.info("Loaded %d settings from %s", len(values), path)
    if overrides:
        cfg = cfg.with_overrides(overrides)
    return cfg
