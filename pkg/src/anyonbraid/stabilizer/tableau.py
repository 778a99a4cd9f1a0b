"""Bit-packed destabilizer/stabilizer tableau.

Rows ``0..n-1`` are destabilizers and rows ``n..2n-1`` stabilizers. Each row
holds its X and Z bits packed little-endian into ``uint64`` words (qubit q is
bit ``q % 64`` of word ``q // 64``) plus one sign bit; a row ``(x, z, r)``
stands for ``(-1)**r`` times the Pauli letters given by ``x, z`` (Y where
both bits are set).

Gates and measurements mutate the tableau in place; ``copy()`` is the only way
to get an independent state.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple, Sequence

import numpy as np

from ..errors import StabilizerError
from .circuit import Circuit, Gate
from .pauli import PauliString

__all__ = ["Tableau", "Measurement", "new_tableau", "apply_gate", "measure_pauli", "expectation"]

_ONE = np.uint64(1)
_WORD = 64


class Measurement(NamedTuple):
    outcome: int
    deterministic: bool


def _words(n: int) -> int:
    return (n + _WORD - 1) // _WORD


def _pack(value: int, width: int) -> np.ndarray:
    return np.frombuffer(value.to_bytes(width * 8, "little"), dtype="<u8").astype(np.uint64)


def _unpack(row: np.ndarray) -> int:
    return int.from_bytes(row.astype("<u8").tobytes(), "little")


def _popcount_rows(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a).sum(axis=-1, dtype=np.int64)


def _as_rng(rng):
    if rng is None or isinstance(rng, (int, np.integer)):
        return np.random.default_rng(rng)
    return rng


class Tableau:
    """Stabilizer state on ``n`` qubits, initialised to ``|0...0>``."""

    def __init__(self, n: int):
        if n < 1:
            raise StabilizerError("a tableau needs at least one qubit")
        self.n = n
        self.width = _words(n)
        self.xs = np.zeros((2 * n, self.width), dtype=np.uint64)
        self.zs = np.zeros((2 * n, self.width), dtype=np.uint64)
        self.rs = np.zeros(2 * n, dtype=np.uint64)
        idx = np.arange(n)
        words, offs = idx // _WORD, (idx % _WORD).astype(np.uint64)
        self.xs[idx, words] = _ONE << offs
        self.zs[n + idx, words] = _ONE << offs

    def copy(self) -> "Tableau":
        t = object.__new__(Tableau)
        t.n, t.width = self.n, self.width
        t.xs, t.zs, t.rs = self.xs.copy(), self.zs.copy(), self.rs.copy()
        return t

    # column access ------------------------------------------------------
    def _check_qubit(self, q: int) -> None:
        if not 0 <= q < self.n:
            raise StabilizerError(f"qubit {q} out of range for n={self.n}")

    def _col(self, arr: np.ndarray, q: int) -> tuple[np.ndarray, int, np.uint64]:
        w, b = divmod(q, _WORD)
        b = np.uint64(b)
        return (arr[:, w] >> b) & _ONE, w, b

    # single-qubit gates -----------------------------------------------
    def h(self, q: int) -> "Tableau":
        self._check_qubit(q)
        xa, w, b = self._col(self.xs, q)
        za, _, _ = self._col(self.zs, q)
        self.rs ^= xa & za
        diff = (xa ^ za) << b
        self.xs[:, w] ^= diff
        self.zs[:, w] ^= diff
        return self

    def s(self, q: int) -> "Tableau":
        self._check_qubit(q)
        xa, w, b = self._col(self.xs, q)
        za, _, _ = self._col(self.zs, q)
        self.rs ^= xa & za
        self.zs[:, w] ^= xa << b
        return self

    def sdg(self, q: int) -> "Tableau":
        self._check_qubit(q)
        xa, w, b = self._col(self.xs, q)
        za, _, _ = self._col(self.zs, q)
        self.rs ^= xa & (za ^ _ONE)
        self.zs[:, w] ^= xa << b
        return self

    def x(self, q: int) -> "Tableau":
        self._check_qubit(q)
        self.rs ^= self._col(self.zs, q)[0]
        return self

    def z(self, q: int) -> "Tableau":
        self._check_qubit(q)
        self.rs ^= self._col(self.xs, q)[0]
        return self

    def y(self, q: int) -> "Tableau":
        self._check_qubit(q)
        self.rs ^= self._col(self.xs, q)[0] ^ self._col(self.zs, q)[0]
        return self

    # two-qubit gates --------------------------------------------------
    def _pair(self, a: int, b: int) -> None:
        self._check_qubit(a)
        self._check_qubit(b)
        if a == b:
            raise StabilizerError("two-qubit gate needs distinct operands")

    def cnot(self, a: int, b: int) -> "Tableau":
        self._pair(a, b)
        xa, wa, ba = self._col(self.xs, a)
        za, _, _ = self._col(self.zs, a)
        xb, wb, bb = self._col(self.xs, b)
        zb, _, _ = self._col(self.zs, b)
        self.rs ^= xa & zb & (xb ^ za ^ _ONE)
        self.xs[:, wb] ^= xa << bb
        self.zs[:, wa] ^= zb << ba
        return self

    def cz(self, a: int, b: int) -> "Tableau":
        self._pair(a, b)
        xa, wa, ba = self._col(self.xs, a)
        za, _, _ = self._col(self.zs, a)
        xb, wb, bb = self._col(self.xs, b)
        zb, _, _ = self._col(self.zs, b)
        self.rs ^= xa & xb & (za ^ zb)
        self.zs[:, wa] ^= xb << ba
        self.zs[:, wb] ^= xa << bb
        return self

    _DISPATCH = {"H": h, "S": s, "SDG": sdg, "X": x, "Y": y, "Z": z, "CNOT": cnot, "CZ": cz}

    def apply_gate(self, gate: Gate, rng=None) -> Measurement | None:
        """Apply one circuit op; measurements return their ``Measurement``."""
        if gate.is_measurement:
            return self.measure_pauli(gate.pauli, rng)
        try:
            fn = self._DISPATCH[gate.name]
        except KeyError:
            raise StabilizerError(f"unknown gate {gate.name!r}") from None
        fn(self, *gate.qubits)
        return None

    def apply_circuit(self, circuit: Circuit | Iterable[Gate], rng=None) -> list[Measurement]:
        """Apply ops in order. Long unitary runs are replayed qubit-major."""
        rng = _as_rng(rng) if rng is not None else None
        results: list[Measurement] = []
        run: list[Gate] = []

        def flush():
            if len(run) >= _COLUMN_RUN:
                cols = _Columns.from_tableau(self)
                for g in run:
                    cols.apply(g)
                cols.store(self)
            else:
                for g in run:
                    self.apply_gate(g)
            run.clear()

        for g in circuit:
            if g.is_measurement:
                flush()
                results.append(self.measure_pauli(g.pauli, rng))
            elif g.name not in self._DISPATCH:
                raise StabilizerError(f"unknown gate {g.name!r}")
            else:
                for q in g.qubits:
                    self._check_qubit(q)
                if len(g.qubits) == 2 and g.qubits[0] == g.qubits[1]:
                    raise StabilizerError("two-qubit gate needs distinct operands")
                run.append(g)
        flush()
        return results

    # Pauli helpers ------------------------------------------------------
    def _packed(self, p: PauliString) -> tuple[np.ndarray, np.ndarray]:
        if p.n != self.n:
            raise StabilizerError(f"size mismatch: Pauli on {p.n} qubits, tableau on {self.n}")
        return _pack(p.x, self.width), _pack(p.z, self.width)

    def _anticommuting(self, px: np.ndarray, pz: np.ndarray, rows: slice) -> np.ndarray:
        """Boolean mask over ``rows`` of rows anticommuting with (px, pz)."""
        sel = np.flatnonzero(px | pz)
        if sel.size == 0:
            return np.zeros(len(range(*rows.indices(2 * self.n))), dtype=bool)
        if sel.size < self.width:
            xs, zs = self.xs[rows, sel], self.zs[rows, sel]
            px, pz = px[sel], pz[sel]
        else:
            xs, zs = self.xs[rows], self.zs[rows]
        return (_popcount_rows((xs & pz) ^ (zs & px)) & 1).astype(bool)

    def _row_phase(self, idx) -> np.ndarray:
        """i-exponent of rows in the ``i**k X^x Z^z`` form."""
        return 2 * self.rs[idx].astype(np.int64) + _popcount_rows(self.xs[idx] & self.zs[idx])

    def _product_sign(self, stab_idx: np.ndarray, px: np.ndarray, pz: np.ndarray) -> int:
        """Sign s with  prod(stabilizers[stab_idx]) == s * unsigned(p)."""
        rows = self.n + stab_idx
        if rows.size == 0:
            if px.any() or pz.any():
                raise StabilizerError("internal: empty product for non-identity Pauli")
            return 1
        xs, zs = self.xs[rows], self.zs[rows]
        k = int(self._row_phase(rows).sum())
        if rows.size > 1:
            zpre = np.bitwise_xor.accumulate(zs, axis=0)
            k += 2 * int(np.bitwise_count(zpre[:-1] & xs[1:]).sum())
        xt = np.bitwise_xor.reduce(xs, axis=0)
        zt = np.bitwise_xor.reduce(zs, axis=0)
        if not (np.array_equal(xt, px) and np.array_equal(zt, pz)):
            raise StabilizerError("internal: tableau rows do not reproduce the Pauli")
        k -= int(np.bitwise_count(xt & zt).sum())
        return 1 if k % 4 == 0 else -1

    @staticmethod
    def _hermitian_sign(p: PauliString) -> int:
        if not p.is_hermitian:
            raise StabilizerError(f"cannot measure non-Hermitian Pauli {p}")
        return 1 if p.phase == 0 else -1

    # measurement ------------------------------------------------------
    def _expectations_small(self, paulis: list[PauliString]) -> list[int]:
        """Single-word tableaux: plain integer arithmetic beats numpy call overhead."""
        n = self.n
        xs = self.xs[:, 0].tolist()
        zs = self.zs[:, 0].tolist()
        rs = self.rs.tolist()
        out = []
        for p in paulis:
            sign = self._hermitian_sign(p)
            if p.n != n:
                raise StabilizerError(f"size mismatch: Pauli on {p.n} qubits, tableau on {n}")
            px, pz = p.x, p.z
            if any(((xs[i] & pz).bit_count() + (zs[i] & px).bit_count()) & 1 for i in range(n, 2 * n)):
                out.append(0)
                continue
            k = 0
            xt = zt = 0
            for i in range(n):
                if ((xs[i] & pz).bit_count() + (zs[i] & px).bit_count()) & 1:
                    x, z = xs[n + i], zs[n + i]
                    k += 2 * rs[n + i] + (x & z).bit_count() + 2 * (zt & x).bit_count()
                    xt ^= x
                    zt ^= z
            if xt != px or zt != pz:
                raise StabilizerError("internal: tableau rows do not reproduce the Pauli")
            k -= (xt & zt).bit_count()
            out.append(sign if k % 4 == 0 else -sign)
        return out

    def expectation(self, p: PauliString) -> int:
        """+1/-1 if +-p is in the stabilizer group, 0 otherwise. Never mutates."""
        if self.width == 1:
            return self._expectations_small([p])[0]
        sign = self._hermitian_sign(p)
        px, pz = self._packed(p)
        n = self.n
        if self._anticommuting(px, pz, slice(n, 2 * n)).any():
            return 0
        s_idx = np.flatnonzero(self._anticommuting(px, pz, slice(0, n)))
        return sign * self._product_sign(s_idx, px, pz)

    def expectations(self, paulis: Iterable[PauliString]) -> list[int]:
        """Batched ``expectation``; sparse Paulis are checked against qubit columns."""
        paulis = list(paulis)
        if self.width == 1:
            return self._expectations_small(paulis)
        if len(paulis) < _COLUMN_RUN:
            return [self.expectation(p) for p in paulis]
        cols = _Columns.from_tableau(self)
        n = self.n
        out = []
        for p in paulis:
            sign = self._hermitian_sign(p)
            if p.n != n:
                raise StabilizerError(f"size mismatch: Pauli on {p.n} qubits, tableau on {n}")
            ac = cols.anticommuting(p)
            if ac[n:].any():
                out.append(0)
                continue
            px, pz = self._packed(p)
            out.append(sign * self._product_sign(np.flatnonzero(ac[:n]), px, pz))
        return out

    def measure_pauli(self, p: PauliString, rng=None, outcome: int | None = None) -> Measurement:
        """Projectively measure the Hermitian Pauli ``p``.

        Deterministic outcomes leave the state unchanged. Random outcomes are
        drawn from ``rng`` (a numpy Generator or an int seed) unless
        ``outcome`` is given, in which case that branch is selected.
        """
        sign = self._hermitian_sign(p)
        px, pz = self._packed(p)
        n = self.n
        ac = self._anticommuting(px, pz, slice(0, 2 * n))
        stab_hits = np.flatnonzero(ac[n:])
        if stab_hits.size == 0:
            value = sign * self._product_sign(np.flatnonzero(ac[:n]), px, pz)
            return Measurement(value, True)

        if outcome is None:
            outcome = 1 - 2 * int(_as_rng(rng).integers(2))
        elif outcome not in (1, -1):
            raise StabilizerError("outcome must be +1 or -1")
        k = n + int(stab_hits[0])
        targets = np.flatnonzero(ac)
        targets = targets[(targets != k) & (targets != k - n)]
        if targets.size:
            self._rowsum(targets, k)
        self.xs[k - n] = self.xs[k]
        self.zs[k - n] = self.zs[k]
        self.rs[k - n] = self.rs[k]
        self.xs[k] = px
        self.zs[k] = pz
        self.rs[k] = np.uint64(outcome * sign == -1)
        return Measurement(outcome, False)

    def _rowsum(self, targets: np.ndarray, src: int) -> None:
        """rows[targets] <- rows[src] * rows[targets]; all pairs must commute."""
        xk, zk = self.xs[src], self.zs[src]
        k = int(self._row_phase(src)) + self._row_phase(targets)
        k = k + 2 * _popcount_rows(zk & self.xs[targets])
        nx = self.xs[targets] ^ xk
        nz = self.zs[targets] ^ zk
        k = (k - _popcount_rows(nx & nz)) % 4
        self.xs[targets] = nx
        self.zs[targets] = nz
        self.rs[targets] = (k // 2).astype(np.uint64)

    # inspection -------------------------------------------------------
    def _row(self, i: int) -> PauliString:
        return PauliString(self.n, _unpack(self.xs[i]), _unpack(self.zs[i]), 2 * int(self.rs[i]))

    def stabilizers(self) -> list[PauliString]:
        return [self._row(self.n + i) for i in range(self.n)]

    def destabilizers(self) -> list[PauliString]:
        return [self._row(i) for i in range(self.n)]

    def same_state(self, other: "Tableau") -> bool:
        """True iff both tableaux describe the same state (same group, same signs)."""
        if other.n != self.n:
            return False
        return all(other.expectation(g) == 1 for g in self.stabilizers())

    def symplectic_gram(self) -> np.ndarray:
        """Pairwise anticommutation matrix of all 2n rows (0/1 entries)."""
        xb = _bits(self.xs, self.n)
        zb = _bits(self.zs, self.n)
        return ((xb @ zb.T + zb @ xb.T) % 2).astype(np.uint8)

    def check_invariants(self) -> bool:
        """Destabilizer i pairs with stabilizer i only; everything else commutes."""
        n = self.n
        gram = self.symplectic_gram()
        expected = np.zeros((2 * n, 2 * n), dtype=np.uint8)
        expected[np.arange(n), n + np.arange(n)] = 1
        expected[n + np.arange(n), np.arange(n)] = 1
        return bool(np.array_equal(gram, expected))

    def __repr__(self) -> str:
        body = "\n".join(p.to_dense() for p in self.stabilizers())
        return f"Tableau(n={self.n})\n{body}"


_COLUMN_RUN = 32


def _transpose(arr: np.ndarray, n_cols: int, n_out_words: int) -> np.ndarray:
    """Bit-transpose a packed (rows, words) matrix to (n_cols, n_out_words)."""
    bits = np.unpackbits(arr.astype("<u8").view(np.uint8), axis=1, bitorder="little")[:, :n_cols]
    packed = np.packbits(bits.T, axis=1, bitorder="little")
    out = np.zeros((n_cols, n_out_words * 8), dtype=np.uint8)
    out[:, :packed.shape[1]] = packed
    return out.view("<u8").astype(np.uint64)


class _Columns:
    """Qubit-major copy of a tableau: bit i of column q is row i's letter on q."""

    def __init__(self, xc: np.ndarray, zc: np.ndarray, r: np.ndarray, n: int):
        self.xc, self.zc, self.r, self.n = xc, zc, r, n

    @classmethod
    def from_tableau(cls, t: "Tableau") -> "_Columns":
        words = _words(2 * t.n)
        r = _transpose(t.rs.reshape(-1, 1), 1, words)[0]
        return cls(_transpose(t.xs, t.n, words), _transpose(t.zs, t.n, words), r, t.n)

    def store(self, t: "Tableau") -> None:
        rows = 2 * self.n
        t.xs[:] = _transpose(self.xc, rows, t.width)
        t.zs[:] = _transpose(self.zc, rows, t.width)
        t.rs[:] = _transpose(self.r.reshape(1, -1), rows, 1)[:, 0]

    def anticommuting(self, p: PauliString) -> np.ndarray:
        acc = np.zeros_like(self.r)
        for q in _bits_of(p.x):
            acc ^= self.zc[q]
        for q in _bits_of(p.z):
            acc ^= self.xc[q]
        bits = np.unpackbits(acc.astype("<u8").view(np.uint8), bitorder="little")
        return bits[:2 * self.n].astype(bool)

    def apply(self, g: Gate) -> None:
        xc, zc = self.xc, self.zc
        name, q = g.name, g.qubits
        a = q[0]
        if name == "H":
            self.r ^= xc[a] & zc[a]
            xc[a], zc[a] = zc[a].copy(), xc[a].copy()
        elif name == "S":
            self.r ^= xc[a] & zc[a]
            zc[a] ^= xc[a]
        elif name == "SDG":
            self.r ^= xc[a] & ~zc[a]
            zc[a] ^= xc[a]
        elif name == "X":
            self.r ^= zc[a]
        elif name == "Z":
            self.r ^= xc[a]
        elif name == "Y":
            self.r ^= xc[a] ^ zc[a]
        elif name == "CNOT":
            b = q[1]
            self.r ^= xc[a] & zc[b] & ~(xc[b] ^ zc[a])
            xc[b] ^= xc[a]
            zc[a] ^= zc[b]
        elif name == "CZ":
            b = q[1]
            self.r ^= xc[a] & xc[b] & (zc[a] ^ zc[b])
            zc[a] ^= xc[b]
            zc[b] ^= xc[a]
        else:
            raise StabilizerError(f"unknown gate {name!r}")


def _bits_of(value: int):
    while value:
        low = value & -value
        yield low.bit_length() - 1
        value ^= low


def _bits(arr: np.ndarray, n: int) -> np.ndarray:
    raw = np.unpackbits(arr.astype("<u8").view(np.uint8), axis=1, bitorder="little")
    return raw[:, :n].astype(np.float32)


def new_tableau(n: int) -> Tableau:
    return Tableau(n)


def apply_gate(t: Tableau, gate: Gate, rng=None) -> Tableau:
    t.apply_gate(gate, rng)
    return t


def measure_pauli(t: Tableau, p: PauliString, rng=None, outcome: int | None = None) -> Measurement:
    return t.measure_pauli(p, rng, outcome)


def expectation(t: Tableau, p: PauliString) -> int:
    return t.expectation(p)
