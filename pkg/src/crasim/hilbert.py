"""Truncated local Hilbert spaces, sparse operator algebra, and lattice graphs.

Basis conventions (fixed, relied on by every other module):

* ``Boson(n_max)``: Fock states ``|0>, ..., |n_max>``, dimension ``n_max + 1``.
* ``TwoLevelAtom``: ``|G> = 0``, ``|E> = 1``.
* ``BosonAtom(n_max)``: one composite tensor factor per cavity+atom with
  index ``2*n + s`` where ``n`` is the photon number and ``s in {0: G, 1: E}``.
  Keeping the pair as a single site makes loss/decay jump operators strictly
  site-local, which the trajectory and MPS solvers require.

Square lattices are indexed row-major: site ``m + n*width`` sits at column
``m``, row ``n``.  With flux ``alpha = p/q`` the hopping phases follow the
Landau gauge: the amplitude for hopping *up* one row at column ``m`` is
``exp(+i*2*pi*alpha*m)`` and horizontal hops are real.  Stored edge weights
``(i, j, w)`` with ``i < j`` are the coefficient of ``a_i^dag a_j``, so a
vertical edge stores ``w = exp(-i*2*pi*alpha*m)``.  Traversing any elementary
plaquette counterclockwise then accumulates the phase ``+2*pi*alpha``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import pi

import numpy as np
import scipy.sparse as sparse

from .errors import DimensionMismatchError, UnsupportedOperatorError

__all__ = [
    "SiteKind",
    "Geometry",
    "LocalBasis",
    "SparseOperator",
    "Lattice",
    "annihilation",
    "creation",
    "number",
    "sigma_minus",
    "sigma_plus",
    "atomic_excitation",
    "excitation_number",
    "identity",
    "kron",
    "embed",
    "total_excitation_number",
    "total_excitation_projector",
    "excitation_restriction",
    "per_site_restriction",
    "restrict_operator",
    "chain",
    "ring",
    "square",
]


class SiteKind(Enum):
    BOSON = "boson"
    TWO_LEVEL_ATOM = "atom"
    BOSON_ATOM = "boson_atom"


class Geometry(Enum):
    OPEN_CHAIN = "open_chain"
    RING = "ring"
    SQUARE_2D = "square_2d"


@dataclass(frozen=True)
class LocalBasis:
    """A truncated local Hilbert space attached to one lattice site."""

    kind: SiteKind
    n_max: int = 0

    def __post_init__(self):
        if self.kind in (SiteKind.BOSON, SiteKind.BOSON_ATOM) and self.n_max < 1:
            raise ValueError(f"photon cutoff must be >= 1, got {self.n_max}")

    @property
    def dim(self) -> int:
        if self.kind is SiteKind.BOSON:
            return self.n_max + 1
        if self.kind is SiteKind.TWO_LEVEL_ATOM:
            return 2
        return 2 * (self.n_max + 1)

    def excitations(self) -> np.ndarray:
        """Excitation count of each basis state (photons plus atomic flips)."""
        if self.kind is SiteKind.BOSON:
            return np.arange(self.n_max + 1)
        if self.kind is SiteKind.TWO_LEVEL_ATOM:
            return np.array([0, 1])
        n = np.arange(self.dim) // 2
        s = np.arange(self.dim) % 2
        return n + s

    @staticmethod
    def boson(n_max):
        return LocalBasis(SiteKind.BOSON, n_max)

    @staticmethod
    def atom():
        return LocalBasis(SiteKind.TWO_LEVEL_ATOM)

    @staticmethod
    def boson_atom(n_max):
        return LocalBasis(SiteKind.BOSON_ATOM, n_max)


class SparseOperator:
    """Square sparse operator on a truncated Hilbert space.

    Thin wrapper around a CSR matrix that fixes the dtype, keeps entries
    deduplicated, and provides the handful of algebra operations the rest of
    the package needs (add, scale, matmul, adjoint, dense conversion).
    """

    __slots__ = ("mat",)

    def __init__(self, mat):
        mat = sparse.csr_matrix(mat, dtype=np.complex128)
        if mat.shape[0] != mat.shape[1]:
            raise DimensionMismatchError(f"operator must be square, got {mat.shape}")
        mat.sum_duplicates()
        self.mat = mat

    @classmethod
    def from_entries(cls, dim, entries):
        """Build from an iterable of (row, col, value) triples."""
        rows, cols, vals = [], [], []
        for r, c, v in entries:
            if not (0 <= r < dim and 0 <= c < dim):
                raise DimensionMismatchError(f"entry ({r},{c}) outside dim {dim}")
            rows.append(r)
            cols.append(c)
            vals.append(v)
        coo = sparse.coo_matrix((vals, (rows, cols)), shape=(dim, dim), dtype=np.complex128)
        return cls(coo)

    @classmethod
    def identity(cls, dim):
        return cls(sparse.identity(dim, dtype=np.complex128, format="csr"))

    @classmethod
    def zeros(cls, dim):
        return cls(sparse.csr_matrix((dim, dim), dtype=np.complex128))

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def entries(self):
        """Nonzero entries as a list of (row, col, value) triples."""
        coo = self.mat.tocoo()
        return [(int(r), int(c), complex(v)) for r, c, v in zip(coo.row, coo.col, coo.data)]

    def to_dense(self) -> np.ndarray:
        return self.mat.toarray()

    def dag(self) -> "SparseOperator":
        return SparseOperator(self.mat.conjugate().transpose())

    def is_hermitian(self, tol=1e-12) -> bool:
        diff = self.mat - self.mat.conjugate().transpose()
        return diff.nnz == 0 or np.max(np.abs(diff.data)) <= tol

    def max_abs(self) -> float:
        return 0.0 if self.mat.nnz == 0 else float(np.max(np.abs(self.mat.data)))

    def __add__(self, other):
        self._check_dim(other)
        return SparseOperator(self.mat + other.mat)

    def __sub__(self, other):
        self._check_dim(other)
        return SparseOperator(self.mat - other.mat)

    def __neg__(self):
        return SparseOperator(-self.mat)

    def __mul__(self, scalar):
        return SparseOperator(self.mat * complex(scalar))

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, SparseOperator):
            self._check_dim(other)
            return SparseOperator(self.mat @ other.mat)
        return self.mat @ other  # vectors / dense arrays pass through

    def _check_dim(self, other):
        if self.dim != other.dim:
            raise DimensionMismatchError(f"dims differ: {self.dim} vs {other.dim}")

    def __repr__(self):
        return f"SparseOperator(dim={self.dim}, nnz={self.mat.nnz})"


# ---------------------------------------------------------------------------
# Site-local operators
# ---------------------------------------------------------------------------

def annihilation(basis: LocalBasis) -> SparseOperator:
    """Photon annihilation operator; identity on the atomic index if present."""
    if basis.kind is SiteKind.TWO_LEVEL_ATOM:
        raise UnsupportedOperatorError("annihilation undefined on a bare two-level atom")
    n_max = basis.n_max
    if basis.kind is SiteKind.BOSON:
        entries = [(n - 1, n, np.sqrt(n)) for n in range(1, n_max + 1)]
        return SparseOperator.from_entries(n_max + 1, entries)
    entries = []
    for n in range(1, n_max + 1):
        for s in (0, 1):
            entries.append((2 * (n - 1) + s, 2 * n + s, np.sqrt(n)))
    return SparseOperator.from_entries(2 * (n_max + 1), entries)


def creation(basis: LocalBasis) -> SparseOperator:
    return annihilation(basis).dag()


def number(basis: LocalBasis) -> SparseOperator:
    """Photon number operator a^dag a."""
    a = annihilation(basis)
    return a.dag() @ a


def sigma_minus(basis: LocalBasis) -> SparseOperator:
    """Atomic lowering operator |G><E|; identity on the photon index if present."""
    if basis.kind is SiteKind.BOSON:
        raise UnsupportedOperatorError("sigma_minus undefined on a photon-only site")
    if basis.kind is SiteKind.TWO_LEVEL_ATOM:
        return SparseOperator.from_entries(2, [(0, 1, 1.0)])
    entries = [(2 * n, 2 * n + 1, 1.0) for n in range(basis.n_max + 1)]
    return SparseOperator.from_entries(basis.dim, entries)


def sigma_plus(basis: LocalBasis) -> SparseOperator:
    return sigma_minus(basis).dag()


def atomic_excitation(basis: LocalBasis) -> SparseOperator:
    """Projector onto the excited atomic state, sigma^+ sigma^-."""
    sm = sigma_minus(basis)
    return sm.dag() @ sm


def excitation_number(basis: LocalBasis) -> SparseOperator:
    """Diagonal operator counting photons plus atomic excitation."""
    exc = basis.excitations().astype(np.complex128)
    return SparseOperator(sparse.diags(exc, format="csr"))


def identity(basis: LocalBasis) -> SparseOperator:
    return SparseOperator.identity(basis.dim)


# ---------------------------------------------------------------------------
# Tensor embedding
# ---------------------------------------------------------------------------

def kron(a: SparseOperator, b: SparseOperator) -> SparseOperator:
    """Kronecker product, dim = a.dim * b.dim."""
    return SparseOperator(sparse.kron(a.mat, b.mat, format="csr"))


def embed(op: SparseOperator, site: int, lattice: "Lattice") -> SparseOperator:
    """Embed a site-local operator into the full lattice product space."""
    if op.dim != lattice.sites[site].dim:
        raise DimensionMismatchError(
            f"operator dim {op.dim} != local dim {lattice.sites[site].dim} at site {site}"
        )
    left = int(np.prod([b.dim for b in lattice.sites[:site]], dtype=np.int64))
    right = int(np.prod([b.dim for b in lattice.sites[site + 1:]], dtype=np.int64))
    mat = op.mat
    if left > 1:
        mat = sparse.kron(sparse.identity(left, dtype=np.complex128), mat)
    if right > 1:
        mat = sparse.kron(mat, sparse.identity(right, dtype=np.complex128))
    return SparseOperator(mat)


def _total_excitations(lattice: "Lattice") -> np.ndarray:
    """Total excitation count of each product-basis state."""
    total = np.zeros(1)
    for basis in lattice.sites:
        total = (total[:, None] + basis.excitations()[None, :]).ravel()
    return total


def total_excitation_number(lattice: "Lattice") -> SparseOperator:
    """Diagonal operator N_total = sum_j (a^dag a + sigma^+ sigma^-)_j."""
    return SparseOperator(sparse.diags(_total_excitations(lattice).astype(np.complex128)))


def total_excitation_projector(lattice: "Lattice", n_max: int) -> SparseOperator:
    """Projector onto the subspace with total excitation number <= n_max."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    keep = (_total_excitations(lattice) <= n_max).astype(np.complex128)
    return SparseOperator(sparse.diags(keep))


def excitation_restriction(lattice: "Lattice", n_max: int):
    """Isometry V (k x D sparse) onto the total-excitation <= n_max subspace.

    ``V @ op.mat @ V.conj().T`` restricts an operator; ``V.conj().T @ V`` is
    the corresponding projector.
    """
    keep = np.nonzero(_total_excitations(lattice) <= n_max)[0]
    return _selection_matrix(keep, lattice.dim)


def per_site_restriction(lattice: "Lattice", per_site_max: int):
    """Isometry onto the subspace with at most ``per_site_max`` excitations per site.

    Used for the hardcore polariton limit (at most one excitation per cavity).
    """
    ok = np.zeros(1, dtype=bool) == np.zeros(1, dtype=bool)
    for basis in lattice.sites:
        site_ok = basis.excitations() <= per_site_max
        ok = (ok[:, None] & site_ok[None, :]).ravel()
    return _selection_matrix(np.nonzero(ok)[0], lattice.dim)


def _selection_matrix(rows, dim):
    k = len(rows)
    data = np.ones(k)
    return sparse.csr_matrix((data, (np.arange(k), rows)), shape=(k, dim), dtype=np.complex128)


def restrict_operator(op: SparseOperator, restriction) -> SparseOperator:
    """Compress an operator onto the subspace selected by a restriction isometry."""
    if restriction.shape[1] != op.dim:
        raise DimensionMismatchError("restriction does not match operator dim")
    return SparseOperator(restriction @ op.mat @ restriction.conjugate().transpose())


# ---------------------------------------------------------------------------
# Lattice
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Lattice:
    """Sites with local bases plus directed edges carrying complex hop weights.

    Edge ``(i, j, w)`` with ``i < j`` is the coefficient of ``a_i^dag a_j`` in
    the hopping sum (its Hermitian conjugate is implied).
    """

    sites: tuple
    edges: tuple
    geometry: Geometry
    width: int = 0
    height: int = 0
    flux: Fraction | None = None

    def __post_init__(self):
        n = len(self.sites)
        seen = set()
        for i, j, _ in self.edges:
            if not (0 <= i < j < n):
                raise ValueError(f"bad edge ({i},{j}) for {n} sites")
            if (i, j) in seen:
                raise ValueError(f"duplicate edge ({i},{j})")
            seen.add((i, j))
        if self.geometry is Geometry.SQUARE_2D:
            if self.width * self.height != n:
                raise ValueError("width*height must equal the site count")
            if self.flux is not None:
                sums = self.plaquette_phase_sums()
                target = 2 * pi * float(self.flux)
                for ph in sums:
                    if abs(_wrap_phase(ph - target)) > 1e-9:
                        raise ValueError(
                            f"plaquette phase {ph:.6f} != 2*pi*alpha = {target:.6f}"
                        )

    @property
    def n_sites(self) -> int:
        return len(self.sites)

    @property
    def dims(self):
        return tuple(b.dim for b in self.sites)

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims, dtype=np.int64))

    def site_index(self, m, n) -> int:
        """Row-major index of column m, row n (square lattices)."""
        return m + n * self.width

    def edge_weight(self, i, j):
        """Weight of the stored edge between i and j (conjugated if i > j)."""
        a, b = (i, j) if i < j else (j, i)
        for u, v, w in self.edges:
            if (u, v) == (a, b):
                return w if i < j else np.conj(w)
        raise KeyError(f"no edge between {i} and {j}")

    def plaquette_phase_sums(self):
        """Accumulated hop phase around each elementary plaquette, counterclockwise.

        The phase of moving from site u to site v is that of the ``a_v^dag a_u``
        coefficient.  With the Landau-gauge assignment this equals
        ``+2*pi*alpha`` per plaquette.
        """
        if self.geometry is not Geometry.SQUARE_2D:
            raise ValueError("plaquettes are defined for square lattices only")
        sums = []
        for n in range(self.height - 1):
            for m in range(self.width - 1):
                loop = [
                    self.site_index(m, n),
                    self.site_index(m + 1, n),
                    self.site_index(m + 1, n + 1),
                    self.site_index(m, n + 1),
                    self.site_index(m, n),
                ]
                ph = 0.0
                for u, v in zip(loop[:-1], loop[1:]):
                    # moving u -> v picks up the phase of the a_v^dag a_u term
                    ph += np.angle(self.edge_weight(v, u))
                sums.append(_wrap_phase(ph))
        return sums

    # -- serialisation ------------------------------------------------------

    def to_json_dict(self) -> dict:
        doc = {
            "sites": [
                {"kind": b.kind.value, "n_max": b.n_max} for b in self.sites
            ],
            "edges": [
                {"i": i, "j": j, "re": float(np.real(w)), "im": float(np.imag(w))}
                for i, j, w in self.edges
            ],
            "geometry": self.geometry.value,
        }
        if self.geometry is Geometry.SQUARE_2D:
            doc["width"] = self.width
            doc["height"] = self.height
        if self.flux is not None:
            doc["flux"] = {"p": self.flux.numerator, "q": self.flux.denominator}
        return doc

    @classmethod
    def from_json_dict(cls, doc: dict) -> "Lattice":
        sites = tuple(
            LocalBasis(SiteKind(s["kind"]), s.get("n_max", 0)) for s in doc["sites"]
        )
        edges = tuple(
            (e["i"], e["j"], complex(e["re"], e.get("im", 0.0))) for e in doc["edges"]
        )
        flux = None
        if doc.get("flux") is not None:
            flux = Fraction(doc["flux"]["p"], doc["flux"]["q"])
        return cls(
            sites=sites,
            edges=edges,
            geometry=Geometry(doc["geometry"]),
            width=doc.get("width", 0),
            height=doc.get("height", 0),
            flux=flux,
        )

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Lattice":
        return cls.from_json_dict(json.loads(text))


def _wrap_phase(ph):
    """Map a phase to (-pi, pi]."""
    return float(np.angle(np.exp(1j * ph)))


def chain(n_sites, basis: LocalBasis, hop=1.0) -> Lattice:
    edges = tuple((i, i + 1, complex(hop)) for i in range(n_sites - 1))
    return Lattice(sites=(basis,) * n_sites, edges=edges, geometry=Geometry.OPEN_CHAIN)


def ring(n_sites, basis: LocalBasis, hop=1.0) -> Lattice:
    if n_sites < 3:
        raise ValueError("a ring needs at least 3 sites")
    edges = [(i, i + 1, complex(hop)) for i in range(n_sites - 1)]
    edges.append((0, n_sites - 1, complex(hop)))
    return Lattice(sites=(basis,) * n_sites, edges=tuple(edges), geometry=Geometry.RING)


def square(width, height, basis: LocalBasis, hop=1.0, flux: Fraction | None = None) -> Lattice:
    """Square lattice with open boundaries; optional Landau-gauge flux per plaquette."""
    edges = []
    alpha = float(flux) if flux is not None else 0.0
    for n in range(height):
        for m in range(width):
            i = m + n * width
            if m + 1 < width:
                edges.append((i, i + 1, complex(hop)))
            if n + 1 < height:
                # stored weight is the a_i^dag a_j coefficient (downward hop);
                # the upward hop amplitude is its conjugate exp(+i*2*pi*alpha*m)
                w = complex(hop) * np.exp(-2j * pi * alpha * m)
                edges.append((i, i + width, w))
    return Lattice(
        sites=(basis,) * (width * height),
        edges=tuple(edges),
        geometry=Geometry.SQUARE_2D,
        width=width,
        height=height,
        flux=flux,
    )
