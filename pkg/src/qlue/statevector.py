"""Small-register statevector simulation for validating the search oracles.

Registers are named bit fields of a dense complex amplitude vector (least
significant = first allocated).  Arithmetic gates are reversible classical
functions lifted to basis-state permutations; oracles compose them with full
uncomputation, so ancillas return to |0> exactly.  Ancilla registers are
allocated on demand and freed with an explicit leakage check, which keeps the
live register count within the 22-qubit budget even for the distance oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, InvalidData

MAX_QUBITS = 22


@dataclass(frozen=True)
class FixedPointReg:
    """Value codec for a register: two's-complement fixed point with frac_bits."""

    width: int
    frac_bits: int = 0
    signed: bool = True

    def __post_init__(self):
        if self.width < 1 or self.frac_bits < 0:
            raise InvalidData("register width must be >= 1 and frac_bits >= 0")

    @property
    def min_value(self) -> float:
        lo = -(1 << (self.width - 1)) if self.signed else 0
        return lo / (1 << self.frac_bits)

    @property
    def max_value(self) -> float:
        hi = (1 << (self.width - 1)) - 1 if self.signed else (1 << self.width) - 1
        return hi / (1 << self.frac_bits)

    def encode(self, value: float) -> int:
        scaled = round(value * (1 << self.frac_bits))
        lo = -(1 << (self.width - 1)) if self.signed else 0
        hi = (1 << (self.width - 1)) - 1 if self.signed else (1 << self.width) - 1
        if not lo <= scaled <= hi:
            raise InvalidData(f"value {value} out of range for {self}")
        return scaled & ((1 << self.width) - 1)

    def decode(self, bits: int) -> float:
        bits &= (1 << self.width) - 1
        if self.signed and bits >> (self.width - 1):
            bits -= 1 << self.width
        return bits / (1 << self.frac_bits)


def _signed_view(raw: np.ndarray, width: int) -> np.ndarray:
    return raw - ((raw >> (width - 1)) & 1) * (1 << width)


class StateVector:
    """Dense statevector over named registers with alloc/free discipline."""

    def __init__(self, registers: tuple[tuple[str, int], ...] = ()):
        self._widths: dict[str, int] = {}
        self.amps = np.ones(1, dtype=np.complex128)
        for name, width in registers:
            self.alloc(name, width)

    # ---- register management ----

    @property
    def n_qubits(self) -> int:
        return sum(self._widths.values())

    def registers(self) -> dict[str, int]:
        return dict(self._widths)

    def width(self, name: str) -> int:
        return self._widths[name]

    def offset(self, name: str) -> int:
        off = 0
        for reg, w in self._widths.items():
            if reg == name:
                return off
            off += w
        raise InvalidData(f"unknown register {name!r}")

    def alloc(self, name: str, width: int) -> None:
        """Append a fresh |0> register at the most significant end."""
        if name in self._widths:
            raise InvalidData(f"register {name!r} already allocated")
        if width < 1:
            raise InvalidData("register width must be >= 1")
        if self.n_qubits + width > MAX_QUBITS:
            raise ContractViolation(
                f"allocating {name!r} ({width}q) exceeds the {MAX_QUBITS}-qubit budget"
            )
        new = np.zeros(self.amps.size << width, dtype=np.complex128)
        new[: self.amps.size] = self.amps
        self.amps = new
        self._widths[name] = width

    def ancilla_leakage(self, name: str) -> float:
        """Probability mass of the register being anything but |0>."""
        axis = self._axis(name)
        arr = self.amps.reshape(self._shape())
        arr = np.moveaxis(arr, axis, 0)
        return float(np.sum(np.abs(arr[1:]) ** 2))

    def free(self, name: str, atol: float = 1e-12) -> float:
        """Release a register that is back in |0>; returns the measured leakage."""
        leak = self.ancilla_leakage(name)
        if leak > atol:
            raise ContractViolation(f"register {name!r} leaks {leak:.3e} outside |0>")
        axis = self._axis(name)
        arr = np.moveaxis(self.amps.reshape(self._shape()), axis, 0)
        self.amps = np.ascontiguousarray(arr[0]).reshape(-1)
        del self._widths[name]
        return leak

    # ---- low-level views ----

    def _shape(self) -> tuple[int, ...]:
        return tuple(1 << w for w in reversed(self._widths.values()))

    def _axis(self, name: str) -> int:
        names = list(self._widths)
        return len(names) - 1 - names.index(name)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def initialize(self, amplitudes: np.ndarray) -> None:
        amplitudes = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        if amplitudes.size != self.amps.size:
            raise InvalidData("amplitude vector size mismatch")
        if abs(np.linalg.norm(amplitudes) - 1.0) > 1e-9:
            raise InvalidData("state must be unit norm")
        self.amps = amplitudes.copy()

    def probabilities(self, name: str) -> np.ndarray:
        axis = self._axis(name)
        arr = np.abs(self.amps.reshape(self._shape())) ** 2
        other = tuple(a for a in range(arr.ndim) if a != axis)
        return arr.sum(axis=other)

    # ---- joint-register table application ----

    def _joint(self, involved: list[str]):
        """Joint-value bookkeeping for a list of distinct registers.

        Joint index: involved[0] is most significant.  Returns (total width,
        per-register shift, per-register width).
        """
        if len(set(involved)) != len(involved):
            raise InvalidData("involved registers must be distinct")
        widths = [self._widths[r] for r in involved]
        shifts, acc = [], 0
        for w in reversed(widths):
            shifts.append(acc)
            acc += w
        shifts.reverse()
        return acc, dict(zip(involved, shifts)), dict(zip(involved, widths))

    def _fold(self, involved: list[str]):
        arr = self.amps.reshape(self._shape())
        axes = [self._axis(r) for r in involved]
        arr = np.moveaxis(arr, axes, range(len(axes)))
        lead = arr.shape[: len(axes)]
        return arr.reshape(int(np.prod(lead)), -1), arr.shape, axes

    def _unfold(self, arr2, shape, axes, involved) -> None:
        arr = arr2.reshape(shape)
        arr = np.moveaxis(arr, range(len(involved)), axes)
        self.amps = np.ascontiguousarray(arr).reshape(-1)

    def apply_permutation(self, involved: list[str], new_of_old: np.ndarray) -> None:
        """Apply a basis permutation given as a table over the joint values."""
        total, _, _ = self._joint(involved)
        if new_of_old.shape != (1 << total,):
            raise InvalidData("permutation table size mismatch")
        inv = np.empty_like(new_of_old)
        inv[new_of_old] = np.arange(new_of_old.size, dtype=new_of_old.dtype)
        arr2, shape, axes = self._fold(involved)
        self._unfold(arr2[inv], shape, axes, involved)

    def apply_phases(self, involved: list[str], signs: np.ndarray) -> None:
        """Multiply amplitudes by per-joint-value phases (diagonal operator)."""
        total, _, _ = self._joint(involved)
        if signs.shape != (1 << total,):
            raise InvalidData("phase table size mismatch")
        arr2, shape, axes = self._fold(involved)
        self._unfold(arr2 * signs[:, None], shape, axes, involved)

    def joint_values(self, involved: list[str]) -> tuple[np.ndarray, dict, dict]:
        total, shifts, widths = self._joint(involved)
        vals = np.arange(1 << total, dtype=np.int64)
        fields = {r: (vals >> shifts[r]) & ((1 << widths[r]) - 1) for r in involved}
        return vals, fields, shifts


# ---- arithmetic gates (lifted reversible classical functions) ----


def _term_values(state: StateVector, fields: dict, term, signed: bool) -> np.ndarray | int:
    if isinstance(term, str):
        raw = fields[term]
        return _signed_view(raw, state.width(term)) if signed else raw
    return int(term)


def _accumulate(state, srcs, dst, scale: int, signed: bool, product: bool) -> None:
    if dst in srcs:
        raise InvalidData("destination register cannot also be a source")
    src_regs = list(dict.fromkeys(t for t in srcs if isinstance(t, str)))
    involved = src_regs + [dst]
    vals, fields, shifts = state.joint_values(involved)
    terms = [_term_values(state, fields, t, signed) for t in srcs]
    if product:
        acc = terms[0] * terms[1]
    else:
        acc = sum(terms)
    w = state.width(dst)
    mask = (1 << w) - 1
    new_dst = (fields[dst] + scale * acc) & mask
    new = vals + ((new_dst - fields[dst]) << shifts[dst])
    state.apply_permutation(involved, new)


def _require_clean(state: StateVector, dst: str) -> None:
    if state.ancilla_leakage(dst) > 1e-12:
        raise ContractViolation(f"destination register {dst!r} is not |0>")


def apply_add(state: StateVector, srcs, dst: str, *, signed: bool = True) -> None:
    """Sum gate: |X>|0> -> |X>|sum of srcs>, modular in the destination width.

    srcs may mix register names and classical integers; register values are
    sign-extended when ``signed``.
    """
    _require_clean(state, dst)
    _accumulate(state, list(srcs), dst, +1, signed, product=False)


def apply_mul(state: StateVector, srcs, dst: str, *, signed: bool = True) -> None:
    """Product gate: |X>|0> -> |X>|x1*x2>, modular in the destination width."""
    srcs = list(srcs)
    if len(srcs) != 2:
        raise InvalidData("apply_mul takes exactly two source terms")
    _require_clean(state, dst)
    _accumulate(state, srcs, dst, +1, signed, product=True)


def apply_negate(state: StateVector, reg: str) -> None:
    """Two's-complement negation |x> -> |-x> (the flip gate)."""
    vals, fields, shifts = state.joint_values([reg])
    mask = (1 << state.width(reg)) - 1
    new = (-fields[reg]) & mask
    state.apply_permutation([reg], vals + ((new - fields[reg]) << shifts[reg]))


def apply_x(state: StateVector, reg: str, bit: int) -> None:
    vals, fields, shifts = state.joint_values([reg])
    new = fields[reg] ^ (1 << bit)
    state.apply_permutation([reg], vals + ((new - fields[reg]) << shifts[reg]))


def apply_cnz(state: StateVector, reg: str) -> None:
    """Phase -1 on the all-ones basis state of the register."""
    vals, fields, _ = state.joint_values([reg])
    signs = np.where(fields[reg] == (1 << state.width(reg)) - 1, -1.0, 1.0)
    state.apply_phases([reg], signs.astype(np.complex128))


def _flag_compare_less(state: StateVector, src: str, threshold: int, flag: str, signed: bool) -> None:
    """flag ^= (value(src) < threshold): the sign-bit subcircuit of a subtractor."""
    vals, fields, shifts = state.joint_values([src, flag])
    v = _term_values(state, fields, src, signed)
    new_flag = fields[flag] ^ (v < threshold)
    state.apply_permutation([src, flag], vals + ((new_flag - fields[flag]) << shifts[flag]))


# ---- oracles ----


def distance_oracle(
    state: StateVector,
    coord_regs,
    base,
    threshold_sq: int,
    *,
    duplicate_diff: bool = False,
) -> None:
    """Phase -1 exactly on coordinate basis states with squared distance < threshold.

    Per axis a difference ancilla is computed (x - base), squared into a running
    accumulator of width 2w+2 (wide enough that in-range inputs never wrap), and
    uncomputed again; a one-qubit flag takes the sign of (sum - threshold), gets
    a Z, and is uncomputed.  ``base`` entries may be classical integers or names
    of equal-width registers.  With ``duplicate_diff`` the squaring multiplier is
    fed from two separate difference copies.
    """
    coord_regs = list(coord_regs)
    base = list(base)
    if len(base) != len(coord_regs):
        raise InvalidData("base must provide one entry per coordinate register")
    w = state.width(coord_regs[0])
    if any(state.width(r) != w for r in coord_regs):
        raise InvalidData("coordinate registers must share one width")
    wa, wans = w + 1, 2 * w + 2

    def diff_terms(axis: int) -> list:
        b = base[axis]
        return [coord_regs[axis], b if isinstance(b, str) else -int(b)]

    def add_diff(dst: str, axis: int, scale: int) -> None:
        b = base[axis]
        if isinstance(b, str):
            _accumulate(state, [coord_regs[axis]], dst, scale, True, product=False)
            _accumulate(state, [b], dst, -scale, True, product=False)
        else:
            _accumulate(state, diff_terms(axis), dst, scale, True, product=False)

    def square_into_acc(axis: int, scale: int) -> None:
        state.alloc("_diff_a", wa)
        add_diff("_diff_a", axis, +1)
        if duplicate_diff:
            state.alloc("_diff_b", wa)
            add_diff("_diff_b", axis, +1)
            _accumulate(state, ["_diff_a", "_diff_b"], "_acc", scale, True, product=True)
            add_diff("_diff_b", axis, -1)
            state.free("_diff_b")
        else:
            _accumulate(state, ["_diff_a", "_diff_a"], "_acc", scale, True, product=True)
        add_diff("_diff_a", axis, -1)
        state.free("_diff_a")

    state.alloc("_acc", wans)
    for axis in range(len(coord_regs)):
        square_into_acc(axis, +1)
    state.alloc("_sign", 1)
    _flag_compare_less(state, "_acc", int(threshold_sq), "_sign", signed=True)
    apply_cnz(state, "_sign")
    _flag_compare_less(state, "_acc", int(threshold_sq), "_sign", signed=True)
    state.free("_sign")
    for axis in range(len(coord_regs)):
        square_into_acc(axis, -1)
    state.free("_acc")


def membership_oracle(state: StateVector, index_reg: str, member_set) -> None:
    """Phase -1 exactly on the listed index values, built gate-by-gate.

    Each member contributes an X-conjugated controlled-Z block: X gates map the
    member pattern to all-ones, a C^nZ flips its phase, and the X gates are then
    undone so later blocks see an unshifted register.
    """
    n = state.width(index_reg)
    for member in member_set:
        member = int(member)
        if not 0 <= member < (1 << n):
            raise InvalidData(f"member index {member} does not fit in {n} bits")
        zero_bits = [b for b in range(n) if not (member >> b) & 1]
        for b in zero_bits:
            apply_x(state, index_reg, b)
        apply_cnz(state, index_reg)
        for b in zero_bits:
            apply_x(state, index_reg, b)


# ---- diffusion and end-to-end search simulation ----


def apply_diffusion(state: StateVector, reg: str, support: int | None = None) -> None:
    """Reflection 2|psi><psi| - 1 about the uniform state on the search register.

    ``support`` restricts |psi> to the first ``support`` basis values of the
    register (a register prepared uniform over a non-power-of-two domain);
    amplitudes outside the support are only negated.
    """
    m = 1 << state.width(reg) if support is None else int(support)
    if not 1 <= m <= (1 << state.width(reg)):
        raise InvalidData("support out of range for register")
    axis = state._axis(reg)
    arr = np.moveaxis(state.amps.reshape(state._shape()), axis, 0).copy()
    mean = arr[:m].mean(axis=0)
    arr[:m] = 2 * mean - arr[:m]
    arr[m:] = -arr[m:]
    state.amps = np.ascontiguousarray(np.moveaxis(arr, 0, axis)).reshape(-1)


def grover_statevector(domain_size: int, marked_set, iterations: int) -> np.ndarray:
    """Measurement distribution after alternating oracle and diffusion rounds.

    The register starts uniform over ``domain_size`` basis states (padded to a
    power of two with never-marked indices); returns the probabilities of the
    first ``domain_size`` outcomes.
    """
    if domain_size < 1:
        raise InvalidData("domain_size must be >= 1")
    marked = sorted({int(i) for i in marked_set})
    if marked and not 0 <= marked[0] <= marked[-1] < domain_size:
        raise InvalidData("marked indices must lie in [0, domain_size)")
    q = max(1, math.ceil(math.log2(domain_size)))
    state = StateVector((("search", q),))
    amps = np.zeros(1 << q, dtype=np.complex128)
    amps[:domain_size] = 1.0 / math.sqrt(domain_size)
    state.initialize(amps)
    signs = np.ones(1 << q, dtype=np.complex128)
    signs[marked] = -1.0
    for _ in range(iterations):
        state.apply_phases(["search"], signs)
        apply_diffusion(state, "search", support=domain_size)
    return state.probabilities("search")[:domain_size]


def grover_success_probability(m: int, k: int, iterations: int) -> float:
    """Closed-form marked-mass after r rounds: sin^2((2r+1) * arcsin(sqrt(k/m)))."""
    theta = math.asin(math.sqrt(k / m))
    return math.sin((2 * iterations + 1) * theta) ** 2
