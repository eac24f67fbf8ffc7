"""
Report - Evaluation report and dimension sweep table, as text
"""

from dataclasses import dataclass, field

from src.prediction.evaluation import DISTANCE_BUCKETS


def _fmt(value):
    if value is None:
        return 'none'
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


@dataclass
class EvaluationReport:
    """Results of one pipeline run plus the config that produced them"""
    config: dict
    load_summary: str
    split_sizes: dict
    auc: dict
    later_summary: str = None
    dropped: int = 0
    communities: int = None
    modularity: float = None
    walks: int = None
    feature_dim: int = None
    classifier_loss: float = None
    distance: dict = None

    def best_method(self):
        return max(self.auc, key=lambda method: (self.auc[method], method))

    def results(self):
        """Machine-readable key/value pairs"""
        values = {f"auc.{method}": score for method, score in self.auc.items()}
        values['best'] = self.best_method()
        values['graph'] = self.load_summary
        if self.later_summary is not None:
            values['graph_t2'] = self.later_summary
        for name, size in self.split_sizes.items():
            values[f"split.{name}"] = size
        values['split.dropped'] = self.dropped
        values['communities'] = self.communities
        values['modularity'] = self.modularity
        values['walks'] = self.walks
        values['feature_dim'] = self.feature_dim
        values['classifier.final_loss'] = self.classifier_loss
        if self.distance:
            for bucket, count in self.distance['_count'].items():
                values[f"distance.count.{bucket}"] = count
            for method, row in self.distance.items():
                if method == '_count':
                    continue
                for bucket, score in row.items():
                    values[f"distance.{method}.{bucket}"] = score
        return values

    def _method_table(self):
        width = max(len(m) for m in self.auc) + 2
        lines = [f"{'method':<{width}}{'AUC':>10}", '-' * (width + 10)]
        best = self.best_method()
        for method, score in self.auc.items():
            marker = '  *' if method == best else ''
            lines.append(f"{method:<{width}}{score:>10.6f}{marker}")
        return lines

    def _distance_table(self):
        methods = [m for m in self.distance if m != '_count']
        width = max(len(m) for m in methods) + 2
        lines = [f"{'distance':<{width}}" + ''.join(f"{b:>12}" for b in DISTANCE_BUCKETS)]
        counts = self.distance['_count']
        lines.append(f"{'positives':<{width}}"
                     + ''.join(f"{counts.get(b, 0):>12}" for b in DISTANCE_BUCKETS))
        for method in methods:
            row = self.distance[method]
            cells = [f"{row[b]:>12.4f}" if b in row else f"{'-':>12}" for b in DISTANCE_BUCKETS]
            lines.append(f"{method:<{width}}" + ''.join(cells))
        return lines

    def render(self):
        lines = ['Link prediction report', '=' * 22, '']
        lines += self._method_table()
        if self.distance:
            lines += ['', 'AUC by geodesic distance in the training graph', '']
            lines += self._distance_table()
        lines += ['', '[results]']
        lines += [f"{key}={_fmt(value)}" for key, value in self.results().items()]
        lines += ['', '[config]']
        lines += [f"{key}={value}" for key, value in self.config.items()]
        return '\n'.join(lines) + '\n'

    def save(self, path):
        with open(path, 'w', encoding='utf-8') as f:
            f.write(self.render())


@dataclass
class SweepTable:
    """AUC for each value of one embedding dimension"""
    axis: str
    rows: list = field(default_factory=list)
    fixed_dim: int = None

    def __len__(self):
        return len(self.rows)

    def render(self):
        lines = [f"# axis={self.axis} fixed_dim={_fmt(self.fixed_dim)}", "dim\tauc"]
        lines += [f"{dim}\t{score:.6f}" for dim, score in self.rows]
        return '\n'.join(lines) + '\n'

    def save(self, path):
        with open(path, 'w', encoding='utf-8') as f:
            f.write(self.render())
