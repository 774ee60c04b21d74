"""Multi-qubit logical circuits on pure and mixed initial states.

The central claim being verified: a computation started from the mixed
product of parity-projected thermal states returns exactly the same final
measurement probability as the same circuit on any single pure basis pair,
because every gate acts identically on every basis pair.  ``run_pure``,
``run_mixed`` and ``qubit_space_oracle`` compute that probability by three
independent routes.

Circuit convention: steps are applied in list order; within one step the
entangling rotations act first, then the X rotations, then the Z rotations
(the product is written Z-rotations leftmost, so they act last).  The JSON
wire format is ``{"version": 1, "qubits": K, "steps": [{"phi": [...K],
"theta": [...K], "gamma": [...K-1]}, ...]}`` with angles in radians.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse as _sparse

from . import fock
from .fock import HybridState, SpaceLayout
from .thermal import ThermalSpec, even_odd_weights, required_cutoff

CIRCUIT_FORMAT_VERSION = 1
ANCILLA_RETURN_TOL = 1e-10
SUPPORT_LEAK_TOL = 1e-9
DEFAULT_CUTOFF_ONE_QUBIT = 20
DEFAULT_CUTOFF_TWO_QUBIT = 8


class CircuitFormatError(ValueError):
    """Malformed circuit document."""


class DimensionBudgetError(ValueError):
    """Requested simulation exceeds the dense-simulation budget."""


@dataclass(frozen=True)
class CircuitStep:
    """One computational step: per-qubit Z angles, X angles, and K-1 nearest-
    neighbour entangler angles (qubit k with qubit k-1)."""

    phi: tuple[float, ...]
    theta: tuple[float, ...]
    gamma: tuple[float, ...]


@dataclass(frozen=True)
class LogicalCircuit:
    qubit_count: int
    steps: tuple[CircuitStep, ...]

    def __post_init__(self):
        k = self.qubit_count
        if k < 1:
            raise CircuitFormatError("qubit_count must be >= 1")
        for i, s in enumerate(self.steps):
            if len(s.phi) != k or len(s.theta) != k or len(s.gamma) != k - 1:
                raise CircuitFormatError(
                    f"step {i}: angle lists must have lengths {k}, {k}, {k - 1}")
            for ang in (*s.phi, *s.theta, *s.gamma):
                if not math.isfinite(ang):
                    raise CircuitFormatError(f"step {i}: non-finite angle {ang}")

    # -- wire format ---------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "version": CIRCUIT_FORMAT_VERSION,
            "qubits": self.qubit_count,
            "steps": [{"phi": list(s.phi), "theta": list(s.theta), "gamma": list(s.gamma)}
                      for s in self.steps],
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "LogicalCircuit":
        allowed = {"version", "qubits", "steps"}
        unknown = set(doc) - allowed
        if unknown:
            raise CircuitFormatError(f"unknown circuit keys: {sorted(unknown)}")
        version = doc.get("version", CIRCUIT_FORMAT_VERSION)
        if version != CIRCUIT_FORMAT_VERSION:
            raise CircuitFormatError(f"unsupported circuit format version {version}")
        if "qubits" not in doc or "steps" not in doc:
            raise CircuitFormatError("circuit document needs 'qubits' and 'steps'")
        steps = []
        for i, s in enumerate(doc["steps"]):
            extra = set(s) - {"phi", "theta", "gamma"}
            if extra:
                raise CircuitFormatError(f"step {i}: unknown keys {sorted(extra)}")
            steps.append(CircuitStep(tuple(float(x) for x in s.get("phi", [])),
                                     tuple(float(x) for x in s.get("theta", [])),
                                     tuple(float(x) for x in s.get("gamma", []))))
        return cls(int(doc["qubits"]), tuple(steps))

    def dump(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(), fh, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "LogicalCircuit":
        with open(path) as fh:
            return cls.from_json_dict(json.load(fh))


def random_circuit(rng: np.random.Generator, qubit_count: int, n_steps: int) -> LogicalCircuit:
    steps = tuple(
        CircuitStep(tuple(rng.uniform(-np.pi, np.pi, qubit_count)),
                    tuple(rng.uniform(-np.pi, np.pi, qubit_count)),
                    tuple(rng.uniform(-np.pi, np.pi, max(qubit_count - 1, 0))))
        for _ in range(n_steps))
    return LogicalCircuit(qubit_count, steps)


def step_gates(circuit: LogicalCircuit):
    """Canonical gate order shared by every execution route.

    Yields ("zz", k, k-1, angle), ("x", k, angle), ("z", k, angle) tuples in
    the order they act on the state.
    """
    for s in circuit.steps:
        for k, ang in enumerate(s.gamma):
            yield ("zz", k + 1, k, ang)
        for k, ang in enumerate(s.theta):
            yield ("x", k, ang)
        for k, ang in enumerate(s.phi):
            yield ("z", k, ang)


@dataclass
class ComputationResult:
    probability: float
    mode: str
    qubit_count: int
    cutoff: int
    basis_indices: tuple[tuple[int, int], ...] | None = None
    mean_excitation: float | None = None
    method: str | None = None
    seed: int | None = None
    truncation_tail: float = 0.0


# ---------------------------------------------------------------------------
# abstract qubit-space reference
# ---------------------------------------------------------------------------

_PX = np.array([[0, 1], [1, 0]], dtype=complex)
_PZ = np.array([[1, 0], [0, -1]], dtype=complex)


def qubit_space_oracle(circuit: LogicalCircuit) -> float:
    """Ground truth in the abstract 2^K logical space with 2x2 Pauli algebra."""
    k = circuit.qubit_count
    if k > 10:
        raise DimensionBudgetError("oracle supports at most 10 logical qubits")
    dim = 2 ** k

    def embed(mat, qubit):
        out = np.array([[1.0 + 0j]])
        for i in range(k):
            out = np.kron(out, mat if i == qubit else np.eye(2))
        return out

    def embed2(mat_a, qa, mat_b, qb):
        out = np.array([[1.0 + 0j]])
        for i in range(k):
            f = mat_a if i == qa else (mat_b if i == qb else np.eye(2))
            out = np.kron(out, f)
        return out

    psi = np.zeros(dim, dtype=complex)
    psi[0] = 1.0
    eye = np.eye(dim)
    for gate in step_gates(circuit):
        if gate[0] == "zz":
            _, ka, kb, ang = gate
            op = embed2(_PZ, ka, _PZ, kb)
        elif gate[0] == "x":
            _, ka, ang = gate
            op = embed(_PX, ka)
        else:
            _, ka, ang = gate
            op = embed(_PZ, ka)
        psi = (math.cos(ang) * eye + 1j * math.sin(ang) * op) @ psi
    return float(abs(psi[0]) ** 2)


# ---------------------------------------------------------------------------
# physical primitives, streamed onto state batches
# ---------------------------------------------------------------------------


def _pair_modes(k: int) -> tuple[int, int]:
    return (2 * k, 2 * k + 1)


def _swap_involution_matrix(d: int, as_sparse: bool) -> np.ndarray | _sparse.csr_matrix:
    """B^dag P_2 B on one mode pair: the physical logical-X involution.

    Equals the two-mode swap on every total-excitation block that fits under
    the cutoff; built block-by-block in total excitation.
    """
    sub = SpaceLayout(0, (d, d))
    B = fock.beam_splitter_5050(sub, 0, 1).matrix
    pvec = np.kron(np.ones(d), (-1.0) ** np.arange(d))
    totals = (np.arange(d)[:, None] + np.arange(d)[None, :]).ravel()
    out = _sparse.lil_matrix((d * d, d * d), dtype=complex) if as_sparse else \
        np.zeros((d * d, d * d), dtype=complex)
    for t in np.unique(totals):
        idx = np.flatnonzero(totals == t)
        blk = B[np.ix_(idx, idx)]
        out[np.ix_(idx, idx)] = blk.conj().T @ (pvec[idx, None] * blk)
    return out.tocsr() if as_sparse else out


class _PhysicalEngine:
    """Streams the ancilla-mediated gate circuits onto a batched state vector.

    Layout: one shared ancilla qubit, then modes (2k, 2k+1) per logical
    qubit.  Works on a (total_dim, batch) array of pure-state columns.
    """

    def __init__(self, qubit_count: int, cutoff: int):
        self.k = qubit_count
        self.d = cutoff
        self.layout = SpaceLayout(1, (cutoff,) * (2 * qubit_count))
        self.dims = self.layout.dims
        self._cdiag = fock.controlled_parity_diag(self.layout, 0, 0)  # same for every mode
        self._bs = {}

    def _beam_splitter(self, k: int):
        if k not in self._bs:
            sub = SpaceLayout(0, (self.d, self.d))
            mat = fock.beam_splitter_5050(sub, 0, 1).matrix
            self._bs[k] = _sparse.csr_matrix(mat) if self.d >= 16 else mat
        return self._bs[k]

    def plus_basis_column(self, modes: tuple[int, ...]) -> np.ndarray:
        v0 = np.zeros(self.layout.total_dim, dtype=complex)
        v0[self.layout.basis_index((0,), modes)] = 1 / math.sqrt(2)
        v0[self.layout.basis_index((1,), modes)] = 1 / math.sqrt(2)
        return v0

    def _apply_controlled_parity(self, work, k):
        ax_mode = self.layout.mode_axis(_pair_modes(k)[1])
        return fock.apply_diag_local(work, self.dims, self._cdiag, (0, ax_mode))

    def _apply_ancilla_rx(self, work, angle):
        rot = fock.qubit_rotation_matrix("x", angle)
        return fock.apply_local(work, self.dims, rot, (0,))

    def _apply_beam_splitter(self, work, k, dagger=False):
        ma, mb = _pair_modes(k)
        mat = self._beam_splitter(k)
        if dagger:
            mat = mat.conj().T
        axes = (self.layout.mode_axis(ma), self.layout.mode_axis(mb))
        return fock.apply_local(work, self.dims, mat, axes)

    def apply_gate(self, work: np.ndarray, gate) -> np.ndarray:
        if gate[0] == "z":
            _, k, ang = gate
            work = self._apply_controlled_parity(work, k)
            work = self._apply_ancilla_rx(work, ang)
            work = self._apply_controlled_parity(work, k)
        elif gate[0] == "x":
            _, k, ang = gate
            work = self._apply_beam_splitter(work, k)
            work = self._apply_controlled_parity(work, k)
            work = self._apply_ancilla_rx(work, ang)
            work = self._apply_controlled_parity(work, k)
            work = self._apply_beam_splitter(work, k, dagger=True)
        else:
            _, ka, kb, ang = gate
            work = self._apply_controlled_parity(work, kb)
            work = self._apply_controlled_parity(work, ka)
            work = self._apply_ancilla_rx(work, ang)
            work = self._apply_controlled_parity(work, ka)
            work = self._apply_controlled_parity(work, kb)
        return work

    def ancilla_minus_weight(self, work: np.ndarray) -> float:
        """Worst-case squared weight on the ancilla |-> component (per column)."""
        t = work.reshape((2, -1) if work.ndim == 1 else (2, -1, work.shape[1]))
        minus = (t[0] - t[1]) / math.sqrt(2)
        axis = 0 if work.ndim == 1 else 0
        w_minus = (np.abs(minus) ** 2).sum(axis=0)
        w_tot = (np.abs(work) ** 2).sum(axis=0)
        return float(np.max(w_minus / w_tot))

    def readout_mask(self) -> np.ndarray:
        """Diagonal of the product of (I + Z_L)/2 projectors over all qubits."""
        mask = np.ones(1)
        for ax, dim in enumerate(self.dims):
            if ax == 0:
                f = np.ones(2)
            else:
                mode = ax - 1
                if mode % 2 == 1:  # second mode of its pair
                    f = ((1.0 + (-1.0) ** np.arange(dim)) / 2.0)
                else:
                    f = np.ones(dim)
            mask = np.kron(mask, f)
        return mask

    def support_mask(self, basis_indices) -> np.ndarray:
        """Diagonal mask of the per-qubit basis-pair subspace (ancilla free)."""
        mask = np.ones((2,), dtype=float)
        for (m, n) in basis_indices:
            pm = np.zeros((self.d, self.d))
            for (i, j) in ((2 * m + 1, 2 * n), (2 * n, 2 * m + 1)):
                pm[i, j] = 1.0
            mask = np.kron(mask, pm.ravel())
        return mask


def _check_basis_indices(basis_indices, qubit_count, cutoff):
    if len(basis_indices) != qubit_count:
        raise ValueError("need one (m, n) basis pair per logical qubit")
    out = []
    for (m, n) in basis_indices:
        if m < 0 or n < 0:
            raise ValueError("basis indices must be non-negative")
        if 2 * m + 1 >= cutoff or 2 * n >= cutoff:
            raise DimensionBudgetError(
                f"basis pair ({m}, {n}) does not fit under cutoff {cutoff}")
        out.append((int(m), int(n)))
    return tuple(out)


def run_pure(circuit: LogicalCircuit, basis_indices, cutoff: int | None = None,
             check_support: bool = True) -> ComputationResult:
    """Evolve one pure basis-pair product state through the physical circuits.

    The shared ancilla is carried explicitly; its return to |+> is asserted
    after every gate.  The result is the expectation of the product of
    (I + Z_L)/2 readout projectors.
    """
    k = circuit.qubit_count
    if cutoff is None:
        cutoff = DEFAULT_CUTOFF_ONE_QUBIT if k == 1 else DEFAULT_CUTOFF_TWO_QUBIT
        # beam-splitter spreading stays exact while the pair total fits
        need = max(2 * m + 1 + 2 * n + 1 for (m, n) in basis_indices)
        cutoff = max(cutoff, need)
    if k > 2 and cutoff ** (2 * k) * 2 > 4_000_000:
        raise DimensionBudgetError("pure run exceeds the dense dimension budget")
    basis_indices = _check_basis_indices(basis_indices, k, cutoff)
    eng = _PhysicalEngine(k, cutoff)
    modes = []
    for (m, n) in basis_indices:
        modes.extend((2 * m + 1, 2 * n))
    work = eng.plus_basis_column(tuple(modes))
    for gate in step_gates(circuit):
        work = eng.apply_gate(work, gate)
        leak = eng.ancilla_minus_weight(work)
        if leak > ANCILLA_RETURN_TOL:
            raise fock.StateError(f"ancilla failed to return to |+>: weight {leak:.3e}")
    a = float((eng.readout_mask() * np.abs(work) ** 2).sum())
    if check_support:
        pop_in = float((eng.support_mask(basis_indices) * np.abs(work) ** 2).sum())
        leak = 1.0 - pop_in
        if leak > SUPPORT_LEAK_TOL:
            raise fock.StateError(
                f"population {leak:.3e} left the encoded basis-pair subspace")
    state = HybridState.pure(eng.layout, work)
    return ComputationResult(a, "pure", k, cutoff, basis_indices=basis_indices,
                             truncation_tail=state.truncation_tail)


# ---------------------------------------------------------------------------
# mixed runs
# ---------------------------------------------------------------------------


def mixed_equivalence_cutoff(mean_excitation: float, pair_weight_tol: float = 1e-7,
                             tail_tol: float = 1e-8, start: int = 8) -> int:
    """Cutoff for mixed runs: thermal tail below `tail_tol` and joint weight of
    pair states with total excitation >= d below `pair_weight_tol` (those are
    the blocks where the truncated beam splitter deviates from the ideal one).
    """
    d = required_cutoff(mean_excitation, tail_tol, start)
    horizon = 4 * d + 64
    w_odd = even_odd_weights(mean_excitation, horizon, -1)
    w_even = even_odd_weights(mean_excitation, horizon, +1)
    while True:
        totals = np.add.outer(np.arange(horizon), np.arange(horizon))
        joint = np.outer(w_odd, w_even)
        broken = float(joint[totals >= d].sum())
        if broken < pair_weight_tol:
            return d
        d += 1


def _mixture_columns(eng: _PhysicalEngine, w_odd: np.ndarray, w_even: np.ndarray,
                     qubit_count: int):
    """Weights and |+> (x) Fock-product columns of the diagonal initial mixture."""
    d = eng.d
    occ_o = np.flatnonzero(w_odd > 0.0)
    occ_e = np.flatnonzero(w_even > 0.0)
    combos = []
    weights = []
    def rec(k, modes, w):
        if k == qubit_count:
            combos.append(tuple(modes))
            weights.append(w)
            return
        for i in occ_o:
            for j in occ_e:
                rec(k + 1, modes + [i, j], w * w_odd[i] * w_even[j])
    rec(0, [], 1.0)
    batch = np.zeros((eng.layout.total_dim, len(combos)), dtype=complex)
    for c, modes in enumerate(combos):
        batch[:, c] = eng.plus_basis_column(modes)
    return np.asarray(weights), batch


def _run_mixed_ensemble(circuit: LogicalCircuit, w_odd, w_even, cutoff) -> float:
    """Exact diagonal-mixture evolution: every occupied Fock product state is
    evolved through the literal ancilla circuits and the readout expectations
    are combined with the mixture weights.  Deterministic, no sampling."""
    eng = _PhysicalEngine(circuit.qubit_count, cutoff)
    weights, work = _mixture_columns(eng, w_odd, w_even, circuit.qubit_count)
    for gate in step_gates(circuit):
        work = eng.apply_gate(work, gate)
        leak = eng.ancilla_minus_weight(work)
        if leak > ANCILLA_RETURN_TOL:
            raise fock.StateError(f"ancilla failed to return to |+>: weight {leak:.3e}")
    mask = eng.readout_mask()
    per_col = (mask[:, None] * np.abs(work) ** 2).sum(axis=0)
    return float(np.dot(weights, per_col))


def _run_mixed_density(circuit: LogicalCircuit, w_odd, w_even, cutoff) -> float:
    """Straight density-matrix conjugation with full gate unitaries.

    Cross-validation route for small cutoffs; cost grows as the sixth power
    of the cutoff for one logical qubit.
    """
    from . import encoding
    k = circuit.qubit_count
    layout = SpaceLayout(1, (cutoff,) * (2 * k))
    if layout.total_dim > 3000:
        raise DimensionBudgetError("density route limited to small cutoffs")
    plus_dm = np.outer(fock.KET_PLUS, fock.KET_PLUS.conj())
    pair = np.kron(np.diag(w_odd), np.diag(w_even))
    rho = plus_dm
    for _ in range(k):
        rho = np.kron(rho, pair)
    refs = [encoding.LogicalQubitRef(i) for i in range(k)]
    for gate in step_gates(circuit):
        if gate[0] == "z":
            U = encoding.gate_UZ(layout, refs[gate[1]], gate[2])
        elif gate[0] == "x":
            U = encoding.gate_UX(layout, refs[gate[1]], gate[2])
        else:
            U = encoding.gate_UZZ(layout, refs[gate[1]], refs[gate[2]], gate[3])
        rho = U.matrix @ rho @ U.matrix.conj().T
    eng = _PhysicalEngine(k, cutoff)
    return float(np.real(np.diag(rho) @ eng.readout_mask()))


def _run_mixed_factorized(circuit: LogicalCircuit, w_odd, w_even, cutoff) -> float:
    """Exact mode-pair-factorized evolution for two logical qubits.

    Every gate acts on the qumodes as cos(a) I + i sin(a) O with an involution
    O local to one pair (or a product of second-mode parities for the
    entangler), and the ancilla returns to |+> exactly; the entangler is the
    only gate that couples the pairs, so the evolved state is a short sum of
    pair-product terms.  The readout expectation factorizes accordingly.
    """
    if circuit.qubit_count != 2:
        raise ValueError("factorized route is for two logical qubits")
    d = cutoff
    pair_dim = d * d
    occ_o = np.flatnonzero(w_odd > 0.0)
    occ_e = np.flatnonzero(w_even > 0.0)
    weights = (w_odd[occ_o, None] * w_even[None, occ_e]).ravel()
    base = np.zeros((pair_dim, weights.size), dtype=complex)
    for c, (i, j) in enumerate((i, j) for i in occ_o for j in occ_e):
        base[i * d + j, c] = 1.0
    z_diag = np.kron(np.ones(d), (-1.0) ** np.arange(d))
    m_inv = _swap_involution_matrix(d, as_sparse=d >= 16)
    # branches: (coefficient, batch for pair 0, batch for pair 1)
    branches = [(1.0 + 0.0j, base, base.copy())]

    def rotated(batch, apply_o, ang):
        return math.cos(ang) * batch + 1j * math.sin(ang) * apply_o(batch)

    for gate in step_gates(circuit):
        if gate[0] == "z":
            _, k, ang = gate
            branches = [
                (c, rotated(b0, lambda v: z_diag[:, None] * v, ang) if k == 0 else b0,
                 rotated(b1, lambda v: z_diag[:, None] * v, ang) if k == 1 else b1)
                for (c, b0, b1) in branches]
        elif gate[0] == "x":
            _, k, ang = gate
            branches = [
                (c, rotated(b0, lambda v: m_inv @ v, ang) if k == 0 else b0,
                 rotated(b1, lambda v: m_inv @ v, ang) if k == 1 else b1)
                for (c, b0, b1) in branches]
        else:
            _, ka, kb, ang = gate
            new = []
            for (c, b0, b1) in branches:
                new.append((c * math.cos(ang), b0, b1))
                new.append((c * 1j * math.sin(ang), z_diag[:, None] * b0,
                            z_diag[:, None] * b1))
            branches = new

    proj = np.kron(np.ones(d), (1.0 + (-1.0) ** np.arange(d)) / 2.0)
    coeffs = np.array([c for (c, _, _) in branches])
    stack0 = np.stack([b0 for (_, b0, _) in branches])          # (R, dim, B)
    stack1 = np.stack([b1 for (_, _, b1) in branches])
    x0 = np.einsum("sdb,d,rdb,b->sr", stack0.conj(), proj, stack0, weights, optimize=True)
    x1 = np.einsum("sdb,d,rdb,b->sr", stack1.conj(), proj, stack1, weights, optimize=True)
    a = np.einsum("s,r,sr,sr->", coeffs.conj(), coeffs, x0, x1)
    return float(a.real)


def run_mixed(circuit: LogicalCircuit, spec: ThermalSpec, cutoff: int | None = None,
              method: str = "auto") -> ComputationResult:
    """Run the circuit on the product of parity-projected thermal pair states.

    The initial state is diagonal in the Fock basis, so the evolution is
    carried out as an exact weighted sum over its eigenstates (or as an exact
    pair-factorized sum for two qubits); both are deterministic density-matrix
    evaluations with no Monte-Carlo sampling.  Readout is the product of
    second-mode parity projectors, never an individual-Fock-state projector.
    """
    k = circuit.qubit_count
    if k > 2:
        raise DimensionBudgetError("mixed runs support at most two logical qubits")
    if cutoff is None:
        start = DEFAULT_CUTOFF_ONE_QUBIT if k == 1 else DEFAULT_CUTOFF_TWO_QUBIT
        cutoff = required_cutoff(spec.mean_excitation, spec.tail_tol, start)
    q = spec.boltzmann_ratio
    if q ** cutoff >= spec.tail_tol:
        raise DimensionBudgetError(
            f"cutoff {cutoff} leaves thermal tail {q ** cutoff:.2e} >= {spec.tail_tol:.0e}")
    w_odd = even_odd_weights(spec.mean_excitation, cutoff, -1)
    w_even = even_odd_weights(spec.mean_excitation, cutoff, +1)
    if method == "auto":
        if k == 1:
            method = "ensemble"
        else:
            method = "factorized"
    if method == "ensemble":
        if k == 2 and cutoff > 14:
            raise DimensionBudgetError("ensemble route for two qubits needs cutoff <= 14")
        a = _run_mixed_ensemble(circuit, w_odd, w_even, cutoff)
    elif method == "density":
        a = _run_mixed_density(circuit, w_odd, w_even, cutoff)
    elif method == "factorized":
        a = _run_mixed_factorized(circuit, w_odd, w_even, cutoff)
    else:
        raise ValueError(f"unknown method {method!r}")
    return ComputationResult(a, "mixed", k, cutoff, mean_excitation=spec.mean_excitation,
                             method=method)
