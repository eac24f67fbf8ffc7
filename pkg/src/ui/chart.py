"""
Chart - Line chart of AUC against embedding dimension, drawn with Pillow
"""

from PIL import Image, ImageDraw, ImageFont

from src.utils.errors import LinkPredictionError


class SweepChart:
    def __init__(self, width=640, height=400):
        self.width = width
        self.height = height
        self.margin = 60

        # Colors
        self.colors = {
            'background_top': (235, 245, 255),     # Pale blue
            'background_bottom': (255, 255, 255),  # White
            'axis': (40, 40, 40),                  # Dark gray
            'grid': (210, 210, 210),               # Light gray
            'line': (255, 140, 0),                 # Orange
            'point': (30, 110, 200),               # Blue
            'text': (0, 0, 0),                     # Black
            'shadow': (150, 150, 150)              # Gray
        }
        self.font = ImageFont.load_default()

    def _plot_area(self):
        m = self.margin
        return m, m // 2, self.width - m // 2, self.height - m

    def _y_range(self, scores):
        low = min(min(scores) - 0.05, 0.5)
        high = min(1.0, max(scores) + 0.05)
        return max(0.0, low), high

    def draw(self, table):
        """Image of the sweep: one point per dimension, evenly spaced"""
        if not table.rows:
            raise LinkPredictionError("cannot chart an empty sweep")
        image = Image.new('RGB', (self.width, self.height), self.colors['background_bottom'])
        canvas = ImageDraw.Draw(image)

        # Background gradient
        top, bottom = self.colors['background_top'], self.colors['background_bottom']
        for y in range(self.height):
            ratio = y / self.height
            color = tuple(int(a + (b - a) * ratio) for a, b in zip(top, bottom))
            canvas.line([(0, y), (self.width, y)], fill=color)

        left, upper, right, lower = self._plot_area()
        dims = [dim for dim, _ in table.rows]
        scores = [score for _, score in table.rows]
        y_low, y_high = self._y_range(scores)

        def to_xy(i, score):
            step = (right - left) / max(1, len(dims) - 1)
            x = left + i * step if len(dims) > 1 else (left + right) / 2
            y = lower - (score - y_low) / (y_high - y_low) * (lower - upper)
            return x, y

        # Grid and y labels
        for k in range(6):
            value = y_low + (y_high - y_low) * k / 5
            _, y = to_xy(0, value)
            canvas.line([(left, y), (right, y)], fill=self.colors['grid'])
            canvas.text((8, y - 6), f"{value:.2f}", fill=self.colors['text'], font=self.font)

        canvas.line([(left, upper), (left, lower), (right, lower)], fill=self.colors['axis'], width=2)

        points = [to_xy(i, score) for i, score in enumerate(scores)]
        if len(points) > 1:
            canvas.line(points, fill=self.colors['line'], width=3)
        for (x, y), dim in zip(points, dims):
            canvas.ellipse([x - 5, y - 5, x + 5, y + 5], fill=self.colors['point'],
                           outline=self.colors['axis'])
            canvas.text((x - 8, lower + 8), str(dim), fill=self.colors['text'], font=self.font)

        # Title with shadow
        title = f"AUC vs {table.axis} dimension"
        if table.fixed_dim is not None:
            title += f" (other fixed at {table.fixed_dim})"
        canvas.text((left + 2, 10), title, fill=self.colors['shadow'], font=self.font)
        canvas.text((left, 8), title, fill=self.colors['text'], font=self.font)
        return image


def render_sweep_chart(table, path, width=640, height=400):
    """Write the sweep chart as a PNG"""
    image = SweepChart(width, height).draw(table)
    image.save(path, format='PNG')
    return image
