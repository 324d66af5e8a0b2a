"""Monte-Carlo verification of symbolic integral values.

Haar-random unitaries are drawn by orthonormalizing complex Gaussian
matrices and fixing the phases of the triangular factor's diagonal. Samples
are split into fixed-size chunks; chunk k draws from the k-th child of the
master seed sequence, so the estimate depends on the seed and the chunk size
but not on the number of worker processes.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Hashable, List, Optional, Sequence, Tuple, Union

import numpy as np

from haarint.errors import DegreeTooLarge, HaarIntError, IndexOutOfRange
from haarint.integrals import IntegralSpec, evaluate_spec
from haarint.ratfield import RationalFunction
from haarint.utils import DEFAULT_CONFIG, normalize_labels, split_samples

logger = logging.getLogger(__name__)

IndexedFactor = Tuple[int, int, int]

ROUNDING_FLOOR = 1e-12


def sample_haar_batch(n: int, size: int, rng: Union[int, np.random.Generator, None] = None) -> np.ndarray:
    """Draw ``size`` Haar-random n x n unitaries as an array of shape (size, n, n)."""
    if n < 1:
        raise ValueError("matrix dimension must be positive")
    rng = np.random.default_rng(rng)
    z = (rng.standard_normal((size, n, n)) + 1j * rng.standard_normal((size, n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    phase = d / np.abs(d)
    return q * phase[:, np.newaxis, :]


def sample_haar(n: int, rng: Union[int, np.random.Generator, None] = None) -> np.ndarray:
    """Draw one Haar-random n x n unitary."""
    return sample_haar_batch(n, 1, rng)[0]


def unitarity_residual(u: np.ndarray) -> float:
    """Largest entry of |U U^dagger - I|, over a single matrix or a batch."""
    n = u.shape[-1]
    product = u @ np.conj(np.swapaxes(u, -1, -2))
    return float(np.max(np.abs(product - np.eye(n))))


def _axis_indices(labels: Sequence[Hashable], n: int, axis: str) -> Dict[Hashable, int]:
    if all(isinstance(label, int) for label in labels):
        mapping = {label: label for label in labels}
    else:
        _, mapping = normalize_labels(labels)
    for label, index in mapping.items():
        if not 1 <= index <= n:
            raise IndexOutOfRange(f"{axis} index {label!r} is outside 1..{n}")
    return mapping


def index_factors(spec: IntegralSpec, n: int) -> Tuple[List[IndexedFactor], List[IndexedFactor]]:
    """Map factor labels to zero-based matrix indices for dimension n.

    Integer labels are used as indices directly; other labels are numbered by
    first occurrence, rows and columns separately.

    Raises:
        IndexOutOfRange: If an index does not fit in an n x n matrix.
    """
    factors = spec.conj_factors + spec.plain_factors
    rows = _axis_indices([i for i, _, _ in factors], n, "row")
    cols = _axis_indices([j for _, j, _ in factors], n, "column")

    def indexed(entries):
        return [(rows[i] - 1, cols[j] - 1, m) for i, j, m in entries]

    return indexed(spec.conj_factors), indexed(spec.plain_factors)


def monomial_values(
    u: np.ndarray, conj: Sequence[IndexedFactor], plain: Sequence[IndexedFactor]
) -> np.ndarray:
    """Evaluate the monomial on every matrix of a batch."""
    values = np.ones(u.shape[0], dtype=complex)
    for i, j, m in conj:
        values *= np.conj(u[:, i, j]) ** m
    for k, l, m in plain:
        values *= u[:, k, l] ** m
    return values


@dataclass
class _Moments:
    count: int = 0
    mean: complex = 0j
    m2_real: float = 0.0
    m2_imag: float = 0.0

    @classmethod
    def of(cls, values: np.ndarray) -> "_Moments":
        mean = complex(values.mean())
        return cls(
            count=len(values),
            mean=mean,
            m2_real=float(np.sum((values.real - mean.real) ** 2)),
            m2_imag=float(np.sum((values.imag - mean.imag) ** 2)),
        )

    def merge(self, other: "_Moments") -> "_Moments":
        if not self.count:
            return other
        if not other.count:
            return self
        total = self.count + other.count
        delta = other.mean - self.mean
        weight = self.count * other.count / total
        return _Moments(
            count=total,
            mean=self.mean + delta * other.count / total,
            m2_real=self.m2_real + other.m2_real + delta.real ** 2 * weight,
            m2_imag=self.m2_imag + other.m2_imag + delta.imag ** 2 * weight,
        )

    def stderr(self) -> Tuple[float, float]:
        if self.count < 2:
            return float("nan"), float("nan")
        scale = self.count * (self.count - 1)
        return float(np.sqrt(self.m2_real / scale)), float(np.sqrt(self.m2_imag / scale))


def _run_chunk(task: Tuple[List[IndexedFactor], List[IndexedFactor], int, int, int, np.random.SeedSequence]) -> _Moments:
    conj, plain, n, size, batch_size, seed_sequence = task
    rng = np.random.default_rng(seed_sequence)
    moments = _Moments()
    for batch in split_samples(size, batch_size):
        u = sample_haar_batch(n, batch, rng)
        moments = moments.merge(_Moments.of(monomial_values(u, conj, plain)))
    return moments


def _z_score(deviation: float, stderr: float) -> float:
    # Floating-point rounding leaves imaginary parts of real integrands near 1e-17.
    return abs(deviation) / max(stderr, ROUNDING_FLOOR)


@dataclass
class McReport:
    """Monte-Carlo estimate of one integral at one dimension n."""

    integral: IntegralSpec
    n: int
    samples: int
    seed: int
    name: Optional[str] = None
    estimate: complex = 0j
    stderr: float = float("nan")
    stderr_imag: float = float("nan")
    symbolic_value: Optional[Fraction] = None
    z_score: Optional[float] = None
    z_imag: Optional[float] = None
    threshold: float = 5.0
    error: Optional[str] = None

    @property
    def flagged(self) -> bool:
        if self.error is not None:
            return True
        return any(z is not None and z > self.threshold for z in (self.z_score, self.z_imag))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "integral": self.integral.to_text(),
            "n": self.n,
            "samples": self.samples,
            "seed": self.seed,
            "estimate": {"real": self.estimate.real, "imag": self.estimate.imag},
            "stderr": self.stderr,
            "stderr_imag": self.stderr_imag,
            "symbolic_value": None if self.symbolic_value is None else str(self.symbolic_value),
            "z_score": self.z_score,
            "z_imag": self.z_imag,
            "threshold": self.threshold,
            "flagged": self.flagged,
            "error": self.error,
        }


def mc_estimate(
    spec: IntegralSpec,
    n: int,
    samples: int,
    rng_state: int = 0,
    chunk_size: int = 50_000,
    batch_size: int = 10_000,
    jobs: int = 1,
    expected: Optional[RationalFunction] = None,
    threshold: float = 5.0,
    name: Optional[str] = None,
) -> McReport:
    """Estimate an integral at dimension n by sampling and compare with its exact value.

    Args:
        spec: The integral.
        n: Matrix dimension.
        samples: Number of Haar samples.
        rng_state: Master seed (nonnegative integer).
        chunk_size: Samples per independently seeded chunk.
        batch_size: Matrices drawn per vectorized batch inside a chunk.
        jobs: Worker processes.
        expected: Exact value to compare against instead of the computed one.
        threshold: Largest acceptable z-score.
        name: Optional label carried into the report.

    Returns:
        The report; ``symbolic_value`` stays None when the exact value exceeds
        the engine's budget.

    Raises:
        IndexOutOfRange: If an index does not fit at dimension n.
        PoleAtValue: If the exact value has a pole at n.
    """
    conj, plain = index_factors(spec, n)

    symbolic: Optional[Fraction] = None
    try:
        value = expected if expected is not None else evaluate_spec(spec)
        symbolic = value.evaluate(n)
    except DegreeTooLarge as e:
        logger.warning(f"No exact value for comparison: {e}")

    chunks = split_samples(samples, chunk_size)
    seeds = np.random.SeedSequence(rng_state).spawn(len(chunks))
    tasks = [(conj, plain, n, size, batch_size, seed) for size, seed in zip(chunks, seeds)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            partials = list(executor.map(_run_chunk, tasks))
    else:
        partials = [_run_chunk(task) for task in tasks]

    moments = _Moments()
    for partial in partials:
        moments = moments.merge(partial)
    stderr, stderr_imag = moments.stderr()
    logger.info(f"Sampled {moments.count} unitaries at n={n} in {len(chunks)} chunks")

    report = McReport(
        integral=spec,
        n=n,
        samples=moments.count,
        seed=rng_state,
        name=name,
        estimate=moments.mean,
        stderr=stderr,
        stderr_imag=stderr_imag,
        symbolic_value=symbolic,
        threshold=threshold,
    )
    report.z_imag = _z_score(moments.mean.imag, stderr_imag)
    if symbolic is not None:
        report.z_score = _z_score(moments.mean.real - float(symbolic), stderr)
    return report


@dataclass(frozen=True)
class SuiteItem:
    """A named integral for a verification run, with an optional expected value."""

    name: str
    spec: IntegralSpec
    expected: Optional[RationalFunction] = None


def check_suite(
    items: Sequence[Union[SuiteItem, IntegralSpec]],
    n_values: Sequence[int],
    samples: int,
    rng_state: int = 0,
    **options: Any,
) -> List[McReport]:
    """Run mc_estimate for every (item, n), recording failures instead of raising."""
    reports = []
    for item in items:
        if isinstance(item, IntegralSpec):
            item = SuiteItem(item.to_text(), item)
        for n in n_values:
            try:
                report = mc_estimate(
                    item.spec, n, samples, rng_state, expected=item.expected, name=item.name, **options
                )
            except HaarIntError as e:
                logger.warning(f"Skipping {item.name} at n={n}: {e}")
                report = McReport(
                    integral=item.spec,
                    n=n,
                    samples=0,
                    seed=rng_state,
                    name=item.name,
                    threshold=options.get("threshold", 5.0),
                    error=str(e),
                )
            if report.flagged and report.error is None:
                logger.warning(f"{item.name} at n={n} flagged: z={report.z_score}, z_imag={report.z_imag}")
            reports.append(report)
    return reports


class MonteCarloVerifier:
    """Runs Monte-Carlo checks with settings from the ``montecarlo`` config section."""

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        """Initialize the MonteCarloVerifier.

        Args:
            config: Full configuration dictionary as returned by load_config.
        """
        settings = dict(DEFAULT_CONFIG["montecarlo"])
        settings.update((config or {}).get("montecarlo", {}))
        self.samples = int(settings["samples"])
        self.seed = int(settings["seed"])
        self.options = {
            "chunk_size": int(settings["chunk_size"]),
            "batch_size": int(settings["batch_size"]),
            "jobs": int(settings["jobs"]),
            "threshold": float(settings["threshold"]),
        }
        logger.info(f"MonteCarloVerifier initialized: {self.samples} samples, seed {self.seed}, {self.options['jobs']} jobs")

    def estimate(
        self,
        spec: IntegralSpec,
        n: int,
        samples: Optional[int] = None,
        seed: Optional[int] = None,
        expected: Optional[RationalFunction] = None,
        name: Optional[str] = None,
    ) -> McReport:
        return mc_estimate(
            spec,
            n,
            samples or self.samples,
            self.seed if seed is None else seed,
            expected=expected,
            name=name,
            **self.options,
        )

    def check_suite(
        self,
        items: Sequence[Union[SuiteItem, IntegralSpec]],
        n_values: Sequence[int],
        samples: Optional[int] = None,
        seed: Optional[int] = None,
    ) -> List[McReport]:
        return check_suite(
            items, n_values, samples or self.samples, self.seed if seed is None else seed, **self.options
        )
