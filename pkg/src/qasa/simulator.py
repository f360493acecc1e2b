"""Synthetic chip output generator.

Stands in for annealing hardware: given ground-truth parameters per qubit and
a sweep design, produces per-(qubit, field) tallies of -1 outcomes.  Since
shots at a fixed field are i.i.d. two-outcome draws, each tally is a single
binomial variate, which keeps M = 5e6 samples per field cheap.

Randomness is counter-based (Philox) and keyed by (seed, qubit id, field
index), so results are bit-identical regardless of how the work is split
across workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import QubitParams, spin_expectation


class DesignError(ValueError):
    pass


class CoverageError(ValueError):
    """Ground truth does not cover every operational qubit."""

    def __init__(self, missing):
        self.missing = sorted(missing)
        super().__init__(f"truth missing {len(self.missing)} operational qubits: "
                         f"{self.missing[:10]}{'...' if len(self.missing) > 10 else ''}")


@dataclass(frozen=True)
class SweepDesign:
    """An ordered grid of input fields plus sampling settings."""

    fields: tuple
    samples_per_field: int
    seed: int = 0
    label: str = ""

    def __post_init__(self):
        fields = tuple(float(h) for h in self.fields)
        object.__setattr__(self, "fields", fields)
        if not fields:
            raise DesignError("field grid is empty")
        if any(b <= a for a, b in zip(fields, fields[1:])):
            raise DesignError("fields must be strictly increasing")
        if self.samples_per_field < 1:
            raise DesignError(f"samples_per_field must be >= 1, got {self.samples_per_field}")


def field_grid(h_min=-1.0, h_max=1.0, h_step=0.025):
    """Uniform inclusive grid, rounded to suppress accumulation error."""
    n = int(round((h_max - h_min) / h_step)) + 1
    return tuple(round(h_min + i * h_step, 12) for i in range(n))


def default_sweep() -> SweepDesign:
    """The standard sweep: 81 fields in [-1, 1] at step 0.025, M = 5e6."""
    return SweepDesign(fields=field_grid(), samples_per_field=5_000_000, seed=0, label="1us")


@dataclass
class RawCounts:
    """Per-field -1 tallies for a set of qubits.

    h and samples are 1-d arrays over fields; counts maps qubit id to an
    array of -1 counts aligned with h.
    """

    h: np.ndarray
    samples: np.ndarray
    counts: dict = field(default_factory=dict)

    def __post_init__(self):
        self.h = np.asarray(self.h, dtype=float)
        self.samples = np.asarray(self.samples, dtype=np.int64)
        for q, c in list(self.counts.items()):
            c = np.asarray(c, dtype=np.int64)
            if c.shape != self.h.shape:
                raise ValueError(f"count column for qubit {q} has wrong length")
            if np.any(c < 0) or np.any(c > self.samples):
                raise ValueError(f"counts for qubit {q} outside [0, samples]")
            self.counts[q] = c

    @property
    def qubit_ids(self):
        return sorted(self.counts)

    def n_fields(self) -> int:
        return self.h.size


def _stream(seed: int, stream_key: int, field_index: int) -> np.random.Generator:
    # 2x64-bit Philox key; one independent stream per (seed, qubit, field)
    packed = ((stream_key & 0xFFFFFFFF) << 24) | (field_index & 0xFFFFFF)
    return np.random.Generator(np.random.Philox(key=[seed & 0xFFFFFFFFFFFFFFFF, packed]))


def sample_counts(p: QubitParams, design: SweepDesign, stream_key: int) -> np.ndarray:
    """Draw the -1 tally for every field of the design, one binomial each."""
    # p_minus straight from the spin mean; bypasses arctanh, which would
    # overflow where tanh saturates to 1 in floating point
    p_minus = (1.0 - spin_expectation(np.array(design.fields), p)) / 2.0
    m = design.samples_per_field
    out = np.empty(len(design.fields), dtype=np.int64)
    for i, pm in enumerate(p_minus):
        out[i] = _stream(design.seed, stream_key, i).binomial(m, pm)
    return out


def simulate_chip(truth: dict, design: SweepDesign, operational=None) -> RawCounts:
    """Sample a whole chip.

    truth maps qubit id -> QubitParams.  If `operational` (an id iterable) is
    given, truth must cover it exactly; extra truth entries are ignored.
    """
    if operational is None:
        ids = sorted(truth)
    else:
        ids = sorted(operational)
        missing = set(ids) - set(truth)
        if missing:
            raise CoverageError(missing)
    n = len(design.fields)
    samples = np.full(n, design.samples_per_field, dtype=np.int64)
    counts = {q: sample_counts(truth[q], design, q) for q in ids}
    return RawCounts(h=np.array(design.fields), samples=samples, counts=counts)
