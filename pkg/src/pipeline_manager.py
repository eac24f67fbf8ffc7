"""
Pipeline Manager - Runs the link prediction stages in order and tracks progress
"""

import logging
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from src.embedding.base_embedder import EmbeddingMatrix
from src.embedding.content import load_documents, train_content
from src.embedding.structural import train_structural
from src.graph.community import CommunityAssignment, louvain, modularity
from src.graph.graph_core import load_edge_list
from src.graph.walker import CommunityWalker, WalkCorpus
from src.prediction.baselines import ScoreKind, score_pairs
from src.prediction.classifier import train_classifier
from src.prediction.evaluation import auc, auc_by_distance
from src.prediction.features import FeatureComposer
from src.prediction.split import DatasetSplit, random_removal_split, temporal_split
from src.ui.report import EvaluationReport, SweepTable
from src.utils.errors import ConfigError, LinkPredictionError, StageError

logger = logging.getLogger(__name__)

EMBEDDING_METHOD = 'embedding'

SWEEP_AXES = {
    'structural': 'struct_dim',
    'content': 'content_dim',
}

# Pipeline order; failures are reported under these names
STAGES = ('ingest', 'split', 'communities', 'walks', 'embed-struct', 'embed-content',
          'train', 'evaluate')

# Files written to the output directory, by stage
OUTPUT_FILES = {
    'split': 'split.tsv',
    'communities': 'communities.tsv',
    'walks': 'walks.txt',
    'embed-struct': 'structural.vec',
    'embed-content': 'content.vec',
    'train': 'model.json',
    'evaluate': 'report.txt',
}


class PipelineManager:
    def __init__(self, config, verbose=True):
        self.config = config
        self.verbose = verbose and not config.quiet
        self.current_stage = None
        self.completed = []
        self.output_dir = Path(config.output_dir)

    @property
    def progress(self):
        return self.verbose

    def _say(self, message):
        if self.verbose:
            print(message)

    @contextmanager
    def _stage(self, name):
        """Tag any failure inside the block with the stage name"""
        if name not in STAGES:
            raise ConfigError(f"unknown stage {name!r}")
        self.current_stage = name
        logger.info("Stage %s started", name)
        try:
            yield
        except StageError:
            raise
        except LinkPredictionError as e:
            raise StageError(name, e) from e
        except OSError as e:
            raise StageError(name, LinkPredictionError(str(e))) from e
        except Exception as e:
            raise StageError(name, LinkPredictionError(f"{type(e).__name__}: {e}")) from e
        self.completed.append(name)
        self.current_stage = None
        logger.info("Stage %s finished", name)

    def output_path(self, stage):
        return self.output_dir / OUTPUT_FILES[stage]

    def _resumable(self, stage):
        return self.config.resume and self.output_path(stage).is_file()

    # Stages

    def load_graphs(self):
        """Ingest the edge list (and the second snapshot for temporal splits)"""
        cfg = self.config
        with self._stage('ingest'):
            cfg.require_inputs()
            graph = load_edge_list(cfg.edges, directed=cfg.directed)
            later = None
            if cfg.split.mode == 'temporal':
                later = load_edge_list(cfg.edges_t2, directed=cfg.directed)
        self._say(f"📥 Loaded {graph!r}")
        return graph, later

    def make_split(self, graph, later=None):
        """Derived from the seed alone, so every ablation sees the same split"""
        cfg = self.config
        with self._stage('split'):
            path = self.output_path('split')
            if self._resumable('split'):
                split = DatasetSplit.load(path, directed=graph.directed)
                logger.info("Resumed split from %s", path)
            elif cfg.split.mode == 'temporal':
                split = temporal_split(graph, later, seed=cfg.seed,
                                       drop_unseen=cfg.split.drop_unseen)
            else:
                split = random_removal_split(graph, cfg.split.test_fraction, seed=cfg.seed)
            split.validate(graph, *([later] if later is not None else []))
            self.output_dir.mkdir(parents=True, exist_ok=True)
            split.save(path)
        self._say(f"✂️ Split ready: {split.sizes()}")
        return split

    def training_graph(self, graph, later, split):
        """Graph the embeddings and baselines may look at: never the test links"""
        if self.config.split.mode == 'temporal':
            if self.config.split.drop_unseen:
                return graph
            return graph.with_nodes(later.tokens)
        return graph.remove_edges(split.positive_test)

    def detect_communities(self, graph):
        cfg = self.config
        with self._stage('communities'):
            path = self.output_path('communities')
            if cfg.communities_file is not None:
                assignment = CommunityAssignment.load(graph, cfg.communities_file)
            elif self._resumable('communities'):
                assignment = CommunityAssignment.load(graph, path)
            else:
                assignment = louvain(graph, seed=cfg.seed)
            q = modularity(graph, assignment)
            self.output_dir.mkdir(parents=True, exist_ok=True)
            assignment.save(graph, path)
        self._say(f"🧩 {assignment.num_communities} communities, Q={q:.4f}")
        return assignment, q

    def generate_walks(self, graph, assignment):
        cfg = self.config
        with self._stage('walks'):
            path = self.output_path('walks')
            if self._resumable('walks'):
                corpus = WalkCorpus.load(graph, path)
            else:
                walker = CommunityWalker(graph, assignment)
                corpus = walker.generate_corpus(cfg.walk, threads=cfg.threads,
                                                progress=self.progress)
                corpus.save(path)
        self._say(f"🚶 {len(corpus)} walks generated")
        return corpus

    def embed_structure(self, graph, corpus, train_cfg=None, save=True):
        cfg = self.config
        train_cfg = train_cfg or cfg.structural
        with self._stage('embed-struct'):
            path = self.output_path('embed-struct')
            if cfg.structural_file is not None:
                vectors = EmbeddingMatrix.load_word2vec(cfg.structural_file)
            elif save and self._resumable('embed-struct'):
                vectors = EmbeddingMatrix.load_word2vec(path)
            else:
                vectors = train_structural(corpus, graph, train_cfg, progress=self.progress)
            if save:
                vectors.save_word2vec(path)
        self._say(f"🧠 Structural vectors: {vectors!r}")
        return vectors

    def embed_content(self, train_cfg=None, save=True):
        cfg = self.config
        train_cfg = train_cfg or cfg.content_train
        with self._stage('embed-content'):
            if cfg.content is None:
                raise ConfigError(f"ablation mode {cfg.ablation.value} needs content=...")
            path = self.output_path('embed-content')
            if save and self._resumable('embed-content'):
                vectors = EmbeddingMatrix.load_word2vec(path)
            else:
                documents = load_documents(cfg.content)
                vectors = train_content(documents, train_cfg, progress=self.progress)
            if save:
                self.output_dir.mkdir(parents=True, exist_ok=True)
                vectors.save_word2vec(path)
        self._say(f"📝 Content vectors: {vectors!r}")
        return vectors

    def fit_classifier(self, split, composer, save=True):
        settings = self.config.classifier
        with self._stage('train'):
            pairs, labels = split.train_pairs()
            model = train_classifier(composer.edge_features(pairs), labels,
                                     lr=settings.lr, epochs=settings.epochs, l2=settings.l2,
                                     batch_size=settings.batch_size or None,
                                     standardize=settings.standardize, seed=self.config.seed)
            if save:
                model.save(self.output_path('train'))
        return model

    def score_methods(self, graph, split, composer, model):
        """Test-pair scores of every method; the classifier contributes its decision value"""
        pairs, _ = split.test_pairs()
        scores = {EMBEDDING_METHOD: model.decision(composer.edge_features(pairs))}
        for kind in ScoreKind:
            scores[kind.value] = np.array(score_pairs(graph, pairs, kind))
        return scores

    def evaluate(self, graph, split, composer, model, with_distance=True):
        """AUC of every method on the identical test pairs"""
        cfg = self.config
        with self._stage('evaluate'):
            scores = self.score_methods(graph, split, composer, model)
            _, labels = split.test_pairs()
            results = {}
            for method, values in scores.items():
                results[method] = auc(values[labels == 1], values[labels == 0],
                                      mode=cfg.auc_mode, samples=cfg.auc_samples, seed=cfg.seed)
            distance = None
            if with_distance:
                distance = auc_by_distance(graph, split, scores, mode=cfg.auc_mode,
                                           samples=cfg.auc_samples, seed=cfg.seed)
        return results, distance

    # Whole runs

    def _prepare(self):
        """Stages shared by a run and every point of a sweep"""
        graph, later = self.load_graphs()
        split = self.make_split(graph, later)
        train_graph = self.training_graph(graph, later, split)
        state = {'graph': graph, 'later': later, 'split': split, 'train_graph': train_graph,
                 'assignment': None, 'modularity': None, 'corpus': None}
        if self.config.ablation.uses_structure:
            if self.config.structural_file is None:
                assignment, q = self.detect_communities(train_graph)
                state['assignment'], state['modularity'] = assignment, q
                state['corpus'] = self.generate_walks(train_graph, assignment)
        return state

    def run(self):
        """Full pipeline; writes every artifact and the report to the output directory"""
        cfg = self.config
        self._say(f"🚀 Running link prediction pipeline (ablation={cfg.ablation.value})")
        if not cfg.deterministic:
            logger.warning("Running with %d threads: embeddings are not bit-reproducible",
                           cfg.threads)
        state = self._prepare()
        train_graph, split = state['train_graph'], state['split']

        structural = content = None
        if cfg.ablation.uses_structure:
            structural = self.embed_structure(train_graph, state['corpus'])
        if cfg.ablation.uses_content:
            content = self.embed_content()

        composer = FeatureComposer(structural, content, cfg.ablation)
        model = self.fit_classifier(split, composer)
        results, distance = self.evaluate(train_graph, split, composer, model)

        report = EvaluationReport(
            config=cfg.to_flat(),
            load_summary=state['graph'].load_report.summary(),
            later_summary=(state['later'].load_report.summary()
                           if state['later'] is not None else None),
            split_sizes=split.sizes(),
            dropped=split.dropped,
            communities=(state['assignment'].num_communities
                         if state['assignment'] is not None else None),
            modularity=state['modularity'],
            walks=len(state['corpus']) if state['corpus'] is not None else None,
            feature_dim=composer.dim,
            classifier_loss=model.losses[-1],
            auc=results,
            distance=distance,
        )
        report.save(self.output_path('evaluate'))
        self._say(f"🏁 AUC {EMBEDDING_METHOD}={results[EMBEDDING_METHOD]:.4f}; "
                  f"report written to {self.output_path('evaluate')}")
        return report

    def sweep(self, values, axis='structural'):
        """AUC for each dimension on one axis, the other dimension held fixed"""
        cfg = self.config
        if not values:
            raise ConfigError("sweep needs at least one dimension value")
        if axis not in SWEEP_AXES:
            raise ConfigError(f"sweep axis must be one of {tuple(SWEEP_AXES)}, got {axis!r}")
        if axis == 'structural' and not cfg.ablation.uses_structure:
            raise ConfigError("cannot sweep structural dimension in content-only mode")
        if axis == 'structural' and cfg.structural_file is not None:
            raise ConfigError("cannot sweep structural dimension with precomputed vectors")
        if axis == 'content' and not cfg.ablation.uses_content:
            raise ConfigError("cannot sweep content dimension in structural-only mode")

        self._say(f"📈 Sweeping {axis} dimension over {list(values)}")
        state = self._prepare()
        train_graph, split = state['train_graph'], state['split']

        structural = content = None
        if axis != 'structural' and cfg.ablation.uses_structure:
            structural = self.embed_structure(train_graph, state['corpus'])
        if axis != 'content' and cfg.ablation.uses_content:
            content = self.embed_content()

        rows = []
        for value in values:
            swept = cfg.with_overrides({SWEEP_AXES[axis]: int(value)})
            if axis == 'structural':
                structural = self.embed_structure(train_graph, state['corpus'],
                                                  train_cfg=swept.structural, save=False)
            else:
                content = self.embed_content(train_cfg=swept.content_train, save=False)
            composer = FeatureComposer(structural, content, cfg.ablation)
            model = self.fit_classifier(split, composer, save=False)
            results, _ = self.evaluate(train_graph, split, composer, model, with_distance=False)
            rows.append((int(value), results[EMBEDDING_METHOD]))
            self._say(f"   d={value}: AUC={results[EMBEDDING_METHOD]:.4f}")

        fixed_axis = 'content' if axis == 'structural' else 'structural'
        fixed_dim = None
        if fixed_axis == 'content' and cfg.ablation.uses_content:
            fixed_dim = cfg.content_train.dim
        elif fixed_axis == 'structural' and cfg.ablation.uses_structure:
            fixed_dim = structural.dim
        table = SweepTable(axis, rows, fixed_dim=fixed_dim)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        table.save(self.output_dir / f"sweep_{axis}.tsv")
        return table
