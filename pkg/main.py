#!/usr/bin/env python3
"""
Commlink - Main Application
Community-aware link prediction from graph structure and node content.
"""

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from src.embedding.base_embedder import EmbeddingMatrix
from src.graph.community import CommunityAssignment
from src.graph.graph_core import write_edge_list
from src.graph.synthetic import attributed_block_model, stochastic_block_model, write_content
from src.graph.walker import WalkCorpus
from src.pipeline_manager import SWEEP_AXES, PipelineManager
from src.prediction.baselines import ScoreKind, rank_pairs, score_pairs
from src.prediction.classifier import LogisticModel
from src.prediction.evaluation import auc
from src.prediction.features import FeatureComposer
from src.prediction.split import DatasetSplit
from src.ui.chart import render_sweep_chart
from src.utils.config import FLAT_KEYS, load_config
from src.utils.errors import ConfigError, LinkPredictionError
from src.utils.logger import setup_logging

logger = logging.getLogger('commlink')

BOOL_KEYS = ('directed', 'drop_unseen', 'standardize')


class LinkPredictionApp:
    def __init__(self):
        self.parser = self._build_parser()
        self.commands = {
            'ingest': self.ingest,
            'communities': self.communities,
            'walk': self.walk,
            'embed-struct': self.embed_struct,
            'embed-content': self.embed_content,
            'split': self.split,
            'train': self.train,
            'evaluate': self.evaluate,
            'baseline': self.baseline,
            'run': self.run_pipeline,
            'sweep': self.sweep,
            'synth': self.synth,
        }

    def _build_parser(self):
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument('--config', help="flat key=value config file")
        common.add_argument('--quiet', action='store_true', help="no progress or status output")
        common.add_argument('--resume', action='store_true',
                            help="reuse stage outputs already in the output directory")
        common.add_argument('-v', '--verbose', action='count', default=1,
                            help="more log output (repeatable)")
        # One flag per config key; values are parsed by the config layer
        for key in FLAT_KEYS:
            flag = '--' + key.replace('_', '-')
            if key in BOOL_KEYS:
                common.add_argument(flag, dest=key, nargs='?', const='true', metavar='BOOL')
            else:
                common.add_argument(flag, dest=key, metavar=key.upper())

        parser = argparse.ArgumentParser(
            prog='commlink',
            description="Community-aware link prediction from graph structure and node content")
        sub = parser.add_subparsers(dest='command', required=True)

        p = sub.add_parser('ingest', parents=[common], help="parse an edge list and report")
        p.add_argument('--out', help="write the normalised edge list here ('-' for stdout)")

        p = sub.add_parser('communities', parents=[common], help="Louvain communities")
        p.add_argument('--out', help="assignment file (default: output dir)")

        p = sub.add_parser('walk', parents=[common], help="community-aware walks")
        p.add_argument('--out', help="walk corpus file (default: output dir)")

        p = sub.add_parser('embed-struct', parents=[common], help="structural vectors")
        p.add_argument('--walks', help="existing walk corpus (generated if omitted)")
        p.add_argument('--out', help="word2vec text file (default: output dir)")

        p = sub.add_parser('embed-content', parents=[common], help="content vectors")
        p.add_argument('--out', help="word2vec text file (default: output dir)")

        p = sub.add_parser('split', parents=[common], help="train/test link split")
        p.add_argument('--out', help="split file (default: output dir)")

        p = sub.add_parser('train', parents=[common], help="train the link classifier")
        p.add_argument('--split', dest='split_file', help="split file (default: output dir)")
        p.add_argument('--content-vectors', help="content vectors (default: output dir)")
        p.add_argument('--out', help="model file (default: output dir)")

        p = sub.add_parser('evaluate', parents=[common], help="AUC of a trained classifier")
        p.add_argument('--split', dest='split_file', help="split file (default: output dir)")
        p.add_argument('--content-vectors', help="content vectors (default: output dir)")
        p.add_argument('--model', help="model file (default: output dir)")

        p = sub.add_parser('baseline', parents=[common], help="local similarity scores")
        p.add_argument('--kind', default=ScoreKind.COMMON_NEIGHBORS.value,
                       choices=[k.value for k in ScoreKind])
        p.add_argument('--pairs', help="file of u<TAB>v pairs (default: test pairs of the split)")
        p.add_argument('--split', dest='split_file', help="split file (default: output dir)")

        sub.add_parser('run', parents=[common], help="full pipeline with report")

        p = sub.add_parser('sweep', parents=[common], help="AUC against embedding dimension")
        p.add_argument('--axis', default='structural', choices=list(SWEEP_AXES))
        p.add_argument('--values', required=True, help="comma-separated dimensions, e.g. 20,50,100")
        p.add_argument('--chart', help="also draw the sweep as a PNG")

        p = sub.add_parser('synth', parents=[common], help="generate a synthetic dataset")
        p.add_argument('model', choices=['sbm', 'attributed'])
        p.add_argument('--sizes', default='100,100', help="SBM block sizes")
        p.add_argument('--p-in', type=float, default=0.1)
        p.add_argument('--p-out', type=float, default=0.01)
        p.add_argument('--blocks', type=int, default=8)
        p.add_argument('--block-size', type=int, default=20)
        p.add_argument('--topics', type=int, default=2)
        p.add_argument('--p-block', type=float, default=0.3)
        p.add_argument('--out-edges', required=True)
        p.add_argument('--out-content', help="JSON-lines posts (attributed model)")
        p.add_argument('--out-blocks', help="planted blocks as node<TAB>block")
        return parser

    def load_config(self, args):
        overrides = {key: getattr(args, key, None) for key in FLAT_KEYS}
        cfg = load_config(args.config, overrides)
        return replace(cfg, quiet=cfg.quiet or args.quiet, resume=cfg.resume or args.resume)

    def _say(self, cfg, message):
        if not cfg.quiet:
            print(message)

    # Subcommands

    def ingest(self, args, cfg):
        manager = PipelineManager(cfg)
        graph, _ = manager.load_graphs()
        if args.out == '-':
            write_edge_list(graph, sys.stdout)
        elif args.out:
            with open(args.out, 'w', encoding='utf-8') as f:
                write_edge_list(graph, f)
            self._say(cfg, f"💾 Edge list written to {args.out}")
        if args.out != '-':
            print(graph.load_report.summary())

    def communities(self, args, cfg):
        manager = PipelineManager(cfg)
        graph, _ = manager.load_graphs()
        assignment, _ = manager.detect_communities(graph)
        if args.out:
            assignment.save(graph, args.out)

    def _walks(self, manager, graph):
        assignment, _ = manager.detect_communities(graph)
        return manager.generate_walks(graph, assignment)

    def walk(self, args, cfg):
        manager = PipelineManager(cfg)
        graph, _ = manager.load_graphs()
        corpus = self._walks(manager, graph)
        if args.out:
            corpus.save(args.out)

    def embed_struct(self, args, cfg):
        manager = PipelineManager(cfg)
        graph, _ = manager.load_graphs()
        if args.walks:
            corpus = WalkCorpus.load(graph, args.walks)
        else:
            corpus = self._walks(manager, graph)
        vectors = manager.embed_structure(graph, corpus)
        if args.out:
            vectors.save_word2vec(args.out)

    def embed_content(self, args, cfg):
        manager = PipelineManager(cfg)
        vectors = manager.embed_content()
        if args.out:
            vectors.save_word2vec(args.out)

    def split(self, args, cfg):
        manager = PipelineManager(cfg)
        graph, later = manager.load_graphs()
        split = manager.make_split(graph, later)
        if args.out:
            split.save(args.out)

    def _split_file(self, args, manager, graph):
        path = args.split_file or manager.output_path('split')
        return DatasetSplit.load(path, directed=graph.directed)

    def _composer(self, args, cfg, manager):
        structural = content = None
        if cfg.ablation.uses_structure:
            path = cfg.structural_file or manager.output_path('embed-struct')
            structural = EmbeddingMatrix.load_word2vec(path)
        if cfg.ablation.uses_content:
            path = args.content_vectors or manager.output_path('embed-content')
            content = EmbeddingMatrix.load_word2vec(path)
        return FeatureComposer(structural, content, cfg.ablation)

    def train(self, args, cfg):
        manager = PipelineManager(cfg)
        graph, _ = manager.load_graphs()
        split = self._split_file(args, manager, graph)
        model = manager.fit_classifier(split, self._composer(args, cfg, manager))
        if args.out:
            model.save(args.out)
        self._say(cfg, f"🎯 Classifier trained, final loss {model.losses[-1]:.4f}")

    def evaluate(self, args, cfg):
        manager = PipelineManager(cfg)
        graph, later = manager.load_graphs()
        split = self._split_file(args, manager, graph)
        model = LogisticModel.load(args.model or manager.output_path('train'))
        train_graph = manager.training_graph(graph, later, split)
        results, _ = manager.evaluate(train_graph, split, self._composer(args, cfg, manager),
                                      model, with_distance=False)
        for method, score in results.items():
            print(f"{method}\t{score:.6f}")

    def baseline(self, args, cfg):
        manager = PipelineManager(cfg)
        graph, later = manager.load_graphs()
        kind = ScoreKind.parse(args.kind)
        if args.pairs:
            pairs = []
            with open(args.pairs, 'r', encoding='utf-8') as f:
                for line in f:
                    parts = line.split()
                    if len(parts) >= 2 and not line.startswith('#'):
                        pairs.append((parts[0], parts[1]))
            scored_graph = graph
        else:
            split = self._split_file(args, manager, graph)
            pairs, labels = split.test_pairs()
            scored_graph = manager.training_graph(graph, later, split)
        scores = score_pairs(scored_graph, pairs, kind)
        score_of = dict(zip(pairs, scores))
        for u, v in rank_pairs([(u, v, s) for (u, v), s in zip(pairs, scores)]):
            print(f"{u}\t{v}\t{float(score_of[(u, v)])!r}")
        if not args.pairs:
            pos = [s for s, label in zip(scores, labels) if label == 1]
            neg = [s for s, label in zip(scores, labels) if label == 0]
            logger.info("%s AUC on the split: %.4f", kind.value,
                        auc(pos, neg, mode=cfg.auc_mode, samples=cfg.auc_samples, seed=cfg.seed))

    def run_pipeline(self, args, cfg):
        report = PipelineManager(cfg).run()
        if not cfg.quiet:
            print()
            print(report.render())

    def sweep(self, args, cfg):
        try:
            values = [int(v) for v in args.values.split(',') if v.strip()]
        except ValueError:
            raise ConfigError(f"--values must be comma-separated integers, got {args.values!r}") from None
        table = PipelineManager(cfg).sweep(values, axis=args.axis)
        print(table.render(), end='')
        if args.chart:
            render_sweep_chart(table, args.chart)
            self._say(cfg, f"📊 Chart written to {args.chart}")

    def synth(self, args, cfg):
        if args.model == 'sbm':
            try:
                sizes = [int(s) for s in args.sizes.split(',')]
            except ValueError:
                raise ConfigError(f"--sizes must be comma-separated integers, got {args.sizes!r}") from None
            # Undirected unless --directed is given explicitly
            directed = cfg.directed if args.directed is not None else False
            graph, blocks = stochastic_block_model(sizes, args.p_in, args.p_out, seed=cfg.seed,
                                                   directed=directed)
        else:
            graph, records, blocks, _ = attributed_block_model(
                n_blocks=args.blocks, block_size=args.block_size, n_topics=args.topics,
                p_block=args.p_block, seed=cfg.seed)
            if args.out_content:
                write_content(records, args.out_content)
        with open(args.out_edges, 'w', encoding='utf-8') as f:
            write_edge_list(graph, f)
        if args.out_blocks:
            CommunityAssignment(blocks).save(graph, args.out_blocks)
        self._say(cfg, f"🎲 Generated {graph!r} -> {args.out_edges}")

    def run(self, argv=None):
        """Parse arguments and dispatch; returns the exit code"""
        args = self.parser.parse_args(argv)
        setup_logging(0 if args.quiet else args.verbose)
        cfg = self.load_config(args)
        if args.command not in ('synth',):
            Path(cfg.output_dir).mkdir(parents=True, exist_ok=True)
        self.commands[args.command](args, cfg)
        return 0


def main(argv=None):
    """Entry point"""
    app = LinkPredictionApp()
    try:
        code = app.run(argv)
    except LinkPredictionError as e:
        print(f"❌ {e}", file=sys.stderr)
        code = 1
    except KeyboardInterrupt:
        print("🛑 Interrupted", file=sys.stderr)
        code = 130
    except Exception as e:
        print(f"❌ Unexpected error: {type(e).__name__}: {e}", file=sys.stderr)
        code = 1
    sys.exit(code)


if __name__ == "__main__":
    main()
