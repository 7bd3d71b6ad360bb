import numpy as np

from tsf.datapipe.segmentation import segment_all
from tsf.datapipe.synthetic import default_spec, generate_synthetic
from tsf.datapipe.types import WindowSet
from tsf.model_train.config import TsfConfig
from tsf.numerics.tensor import no_grad

STEP = 1e-6
CONFIRM_RATIO = 8
RELATIVE_TOLERANCE = 1e-4
ABSOLUTE_FLOOR = 1e-6


def tiny_config(**overrides) -> TsfConfig:
    """Every stage a few channels wide so gradient checks and training stay fast."""
    values = dict(
        imu_count=1, num_classes=3, window=16,
        cconv_channels=4, gyro_kernel=2, projection_channels=6, channels=8, local_kernel=3,
        graph_layers=2, attention_layers=2, heads=2,
        epochs=2, batch_size=8, lr_halving_epochs=5, mixup_alpha=0.2, val_fraction=0.25, runs=1, seed=0,
    )
    values.update(overrides)
    return TsfConfig(**values)


def random_windows(n: int = 12, imus: int = 1, length: int = 16, classes: int = 3, subjects: int = 3,
                   seed: int = 0, sample_rate_hz: float = 50.0) -> WindowSet:
    rng = np.random.default_rng(seed)
    labels = np.arange(n) % classes
    return WindowSet(
        data=rng.standard_normal((n, imus, 3, 3, length)),
        labels=labels,
        subjects=np.arange(n) % subjects,
        trials=np.zeros(n, dtype=int),
        sample_rate_hz=sample_rate_hz,
        class_names=[f"class-{c}" for c in range(classes)],
    )


def sample_indices(shape, rng: np.random.Generator, count: int) -> list[tuple[int, ...]]:
    total = int(np.prod(shape))
    flat = rng.choice(total, size=min(count, total), replace=False)
    return [np.unravel_index(i, shape) for i in flat]


def desk_scale_windows(seed: int = 0, **overrides) -> WindowSet:
    """Segmented windows of the four-activity synthetic set, three subjects at 32 s per recording."""
    spec = default_spec(duration_s=32.0, **overrides)
    return segment_all(generate_synthetic(spec, seed), spec.window, spec.overlap, [c.name for c in spec.classes])


def numeric_gradient(loss_fn, array: np.ndarray, index, step: float = STEP) -> float:
    original = array[index]
    with no_grad():
        array[index] = original + step
        plus = loss_fn().item()
        array[index] = original - step
        minus = loss_fn().item()
    array[index] = original
    return (plus - minus) / (2 * step)


def gradient_bound(a: float, b: float) -> float:
    return RELATIVE_TOLERANCE * max(abs(a), abs(b)) + ABSOLUTE_FLOOR


def smooth_numeric_gradient(loss_fn, array: np.ndarray, index) -> float | None:
    """Central difference confirmed at a finer step; None when no pair agrees.

    A ReLU or absolute-value kink inside the step makes the estimate depend on
    the step, so such points are skipped instead of compared.
    """
    for step in (STEP, STEP / 10):
        coarse = numeric_gradient(loss_fn, array, index, step)
        fine = numeric_gradient(loss_fn, array, index, step / CONFIRM_RATIO)
        if abs(coarse - fine) <= gradient_bound(coarse, fine):
            return fine
    return None


class GradientCheckMixin:
    """Central finite differences against the recorded backward pass."""

    def assertGradientsMatch(self, loss_fn, tensors, seed: int = 0, per_tensor: int = 6):
        rng = np.random.default_rng(seed)
        for tensor in tensors:
            tensor.grad = None
        loss_fn().backward()
        analytic = {id(t): (t.grad.copy() if t.grad is not None else np.zeros_like(t.data)) for t in tensors}
        for tensor in tensors:
            label = getattr(tensor, "name", "") or tensor.shape
            checked = skipped = 0
            for index in sample_indices(tensor.shape, rng, tensor.data.size):
                if checked == per_tensor:
                    break
                expected = smooth_numeric_gradient(loss_fn, tensor.data, index)
                if expected is None:
                    skipped += 1
                    continue
                actual = analytic[id(tensor)][index]
                self.assertLessEqual(abs(actual - expected), gradient_bound(actual, expected),
                                     f"{label} at {index}: analytic {actual!r} vs numeric {expected!r}")
                checked += 1
            self.assertGreater(checked, 0, f"{label}: all {skipped} sampled entries sit on a kink")
