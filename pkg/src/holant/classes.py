"""Membership tests for the tractable signature families.

Three base families drive the classification, plus their images under
basis changes:

* product form: tensor products of unaries with binary equality and
  disequality links (equivalently, every primitive tensor factor has its
  support inside an antipodal pair of assignments);
* quadratic phase on an affine support: a scalar times the indicator of
  an affine subspace times i**Q for a multilinear quadratic Q over Z4
  whose cross terms are all even;
* perfect-matching realizable: signatures passing the parity condition
  and the full family of matching identities.

The transformed variants twist by diag(1, w) for small roots of unity or
by the Hadamard matrix before testing.  All membership predicates here
are exact and scale-invariant, and failures carry a witness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ._gf2 import parity, rref
from .scalar import I, ONE, ZERO, Scalar, zeta_power
from .signatures import Signature, normalize, unary
from .transforms import H2, apply_matrix, scale_by_weight


# -- parity ------------------------------------------------------------------


def parity_of(f: Signature) -> str:
    """'even', 'odd', 'zero', or 'none' by the weights of the support."""
    seen_even = seen_odd = False
    for idx in f.support():
        if idx.bit_count() & 1:
            seen_odd = True
        else:
            seen_even = True
    if seen_even and seen_odd:
        return "none"
    if seen_even:
        return "even"
    if seen_odd:
        return "odd"
    return "zero"


# -- tensor factorization ----------------------------------------------------


def _slice(f: Signature, keep, fixed_idx: int) -> Signature:
    """Restrict to the positions in `keep`, others pinned to fixed_idx bits."""
    n = f.arity
    k = len(keep)
    base = fixed_idx
    for p in keep:
        base &= ~(1 << (n - p))
    values = []
    for y in range(1 << k):
        idx = base
        for j, p in enumerate(keep):
            if (y >> (k - 1 - j)) & 1:
                idx |= 1 << (n - p)
        values.append(f[idx])
    return Signature(values)


def _splits_off(f: Signature, smask: int, ref: int) -> bool:
    """Rank-one test for the flattening that separates smask from the rest."""
    n = f.arity
    tmask = ((1 << n) - 1) ^ smask
    fref = f[ref]
    for beta in range(1 << n):
        left = f[(beta & smask) | (ref & tmask)]
        right = f[(ref & smask) | (beta & tmask)]
        if f[beta] * fref != left * right:
            return False
    return True


def primitive_decomposition(f: Signature):
    """Tensor factors of f that cannot be split further.

    Returns [(positions, factor), ...] with 1-based strictly increasing
    position tuples partitioning 1..n.  Interleaving the factors back
    together reproduces f exactly; the block holding the lowest variable
    carries the overall scale.  The decomposition is unique up to nonzero
    constants between blocks.
    """
    if f.is_zero:
        raise ValueError("the zero signature has no primitive decomposition")
    if f.arity == 0:
        return [((), f)]
    return _decompose(f, tuple(range(1, f.arity + 1)))


def _decompose(f: Signature, labels):
    n = f.arity
    if n == 1:
        return [(labels, f)]
    ref = min(f.support())
    block = None
    # smallest split containing x1, sizes then lexicographic
    for size in range(1, n):
        for rest in itertools.combinations(range(2, n + 1), size - 1):
            cand = (1,) + rest
            smask = 0
            for p in cand:
                smask |= 1 << (n - p)
            if _splits_off(f, smask, ref):
                block = cand
                break
        if block:
            break
    if block is None:
        return [(labels, f)]
    other = tuple(p for p in range(1, n + 1) if p not in block)
    g = _slice(f, block, ref)
    h = _slice(f, other, ref) / f[ref]
    head = [(tuple(labels[p - 1] for p in block), g)]
    return head + _decompose(h, tuple(labels[p - 1] for p in other))


def is_degenerate(f: Signature):
    """Is f a tensor product of unaries?  Returns (bool, factors).

    For a degenerate f of arity n the factors list holds n unaries whose
    plain tensor product equals f (the zero signature gets an all-zero
    first factor).  Arity 0 counts as degenerate with no factors.
    """
    n = f.arity
    if n == 0:
        return True, []
    if f.is_zero:
        return True, [unary(0, 0)] + [unary(1, 1)] * (n - 1)
    factors = primitive_decomposition(f)
    if any(g.arity != 1 for _, g in factors):
        return False, None
    by_position = sorted(factors, key=lambda item: item[0][0])
    return True, [g for _, g in by_position]


@dataclass(frozen=True)
class ProductAnalysis:
    member: bool
    factors: tuple | None = None
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.member


def is_product(f: Signature) -> ProductAnalysis:
    """Is f a product of unaries, equalities and disequalities?

    Decided through the primitive decomposition: f belongs iff every
    factor of arity two or more has exactly two support points and they
    are complements of each other.  The zero signature counts as a member
    by convention (it is the value-zero unary tensored onto anything).
    """
    if f.is_zero:
        return ProductAnalysis(True, None, {"note": "zero signature"})
    factors = tuple(primitive_decomposition(f))
    for positions, g in factors:
        if g.arity <= 1:
            continue
        supp = sorted(g.support())
        full = (1 << g.arity) - 1
        if len(supp) != 2 or supp[0] ^ supp[1] != full:
            return ProductAnalysis(False, None, {
                "positions": positions,
                "reason": "factor support is not an antipodal pair",
                "support": tuple(supp),
            })
    return ProductAnalysis(True, factors, None)


# -- affine support and quadratic phase --------------------------------------


@dataclass(frozen=True)
class AffineSupport:
    """The support of a signature as an affine subspace of GF(2)^n.

    `point` is the lexicographically least support index.  `basis` spans
    the direction space, reduced so basis[j] projects to the j-th unit
    vector on the free positions; `free` is the lexicographically first
    variable set that parameterizes the support.  `constraints` pins the
    bound variables: each (mask, rhs) says the XOR of the masked bits
    equals rhs.
    """

    arity: int
    point: int
    basis: tuple
    free: tuple
    constraints: tuple

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def contains(self, idx: int) -> bool:
        return all(parity(idx & mask) == rhs for mask, rhs in self.constraints)

    def project_free(self, idx: int) -> int:
        n, k = self.arity, len(self.free)
        y = 0
        for j, p in enumerate(self.free):
            y |= ((idx >> (n - p)) & 1) << (k - 1 - j)
        return y

    def full_index(self, free_bits: int) -> int:
        """The unique support point whose free coordinates are free_bits."""
        k = len(self.free)
        idx = self.point
        mismatch = free_bits ^ self.project_free(self.point)
        for j in range(k):
            if (mismatch >> (k - 1 - j)) & 1:
                idx ^= self.basis[j]
        return idx

    def points(self):
        for y in range(1 << len(self.free)):
            yield self.full_index(y)


def affine_support(f: Signature):
    """Describe supp(f) as an affine subspace, or None if it is not one.

    The affinity test is rank-based: the directions away from the least
    support point span a space of size 2^rank, and the support is affine
    exactly when its cardinality hits that bound.
    """
    supp = sorted(f.support())
    if not supp:
        return None
    n = f.arity
    point = supp[0]
    rows = rref(s ^ point for s in supp[1:])
    if len(supp) != 1 << len(rows):
        return None
    # pivot bit b <-> variable n - b; high-bit pivoting makes this the
    # lexicographically first usable variable set
    free = tuple(sorted(n - b for b in rows))
    basis = tuple(rows[n - p] for p in free)
    constraints = []
    for q in range(1, n + 1):
        if q in free:
            continue
        mask = 1 << (n - q)
        for j, b in enumerate(basis):
            if (b >> (n - q)) & 1:
                mask |= 1 << (n - free[j])
        constraints.append((mask, parity(mask & point)))
    return AffineSupport(n, point, basis, free, tuple(constraints))


def compress(f: Signature, free=None) -> Signature:
    """Restrict f to its support, indexed by the free variables.

    Entry y of the result is f at the unique support point whose free
    coordinates spell y.  With free=None the canonical (lexicographically
    first) free set is used.
    """
    sup = affine_support(f)
    if sup is None:
        raise ValueError("support is not affine")
    if free is not None and tuple(free) != sup.free:
        sup = _with_free(f, sup, tuple(free))
    k = len(sup.free)
    return Signature([f[sup.full_index(y)] for y in range(1 << k)])


def _with_free(f: Signature, sup: AffineSupport, free) -> AffineSupport:
    """Re-parameterize an affine support over a caller-chosen free set."""
    n = sup.arity
    if len(free) != sup.dimension or any(not 1 <= p <= n for p in free):
        raise ValueError(f"{free} cannot parameterize this support")
    k = len(free)
    basis = list(sup.basis)
    # Gaussian elimination restricted to the chosen columns
    new_basis = []
    for j, p in enumerate(free):
        bit = 1 << (n - p)
        pivot = next((r for r in basis if r & bit), None)
        if pivot is None:
            raise ValueError(f"{free} cannot parameterize this support")
        basis.remove(pivot)
        basis = [r ^ pivot if r & bit else r for r in basis]
        new_basis = [r ^ pivot if r & bit else r for r in new_basis]
        new_basis.append(pivot)
    constraints = []
    for q in range(1, n + 1):
        if q in free:
            continue
        mask = 1 << (n - q)
        for j, b in enumerate(new_basis):
            if (b >> (n - q)) & 1:
                mask |= 1 << (n - free[j])
        constraints.append((mask, parity(mask & sup.point)))
    return AffineSupport(n, sup.point, tuple(new_basis), tuple(free),
                         tuple(constraints))


@dataclass(frozen=True)
class Z4Polynomial:
    """A multilinear polynomial over Z4 in up to `arity` variables.

    Monomials are bitmasks in signature index convention (x1 is the top
    bit); coefficients are nonzero residues mod 4.
    """

    arity: int
    coefficients: tuple

    def as_dict(self) -> dict:
        return dict(self.coefficients)

    def evaluate(self, idx: int) -> int:
        total = 0
        for mask, c in self.coefficients:
            if mask & idx == mask:
                total += c
        return total % 4

    @property
    def total_degree(self) -> int:
        return max((mask.bit_count() for mask, _ in self.coefficients),
                   default=0)

    def monomial_positions(self, mask: int):
        return tuple(p for p in range(1, self.arity + 1)
                     if (mask >> (self.arity - p)) & 1)


def z4_polynomial(f: Signature) -> Z4Polynomial:
    """The unique multilinear P over Z4 with f = i**P.

    Requires every entry of f to be a power of i.  Computed by Moebius
    inversion over the subset lattice and checked by re-evaluation.
    """
    n = f.arity
    r = []
    for idx, v in enumerate(f.values):
        k = v.as_power_of_i()
        if k is None:
            raise ValueError(f"entry {idx} is not a power of i")
        r.append(k)
    coeff = list(r)
    for t in range(n):
        bit = 1 << t
        for idx in range(1 << n):
            if idx & bit:
                coeff[idx] = (coeff[idx] - coeff[idx ^ bit]) % 4
    # zeta transform undoes the inversion; guards the arithmetic above
    back = list(coeff)
    for t in range(n):
        bit = 1 << t
        for idx in range(1 << n):
            if idx & bit:
                back[idx] = (back[idx] + back[idx ^ bit]) % 4
    assert back == r
    terms = tuple((mask, c) for mask, c in enumerate(coeff) if c)
    return Z4Polynomial(n, terms)


@dataclass(frozen=True)
class AffineAnalysis:
    member: bool
    scale: Scalar | None = None
    support: AffineSupport | None = None
    polynomial: Z4Polynomial | None = None
    reason: str | None = None
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.member


def is_affine(f: Signature) -> AffineAnalysis:
    """Is f a scalar times i**Q on an affine support?

    The test normalizes by the first nonzero entry, requires the
    remaining entries to be powers of i, requires the support to be an
    affine subspace, and requires the phase polynomial on the compressed
    signature to be quadratic with even cross terms.  The zero signature
    is a member.
    """
    if f.is_zero:
        return AffineAnalysis(True, witness={"note": "zero signature"})
    lam, g = normalize(f)
    for idx in sorted(g.support()):
        if g[idx].as_power_of_i() is None:
            return AffineAnalysis(
                False, reason="entry is not a scaled power of i",
                witness={"index": idx, "value": str(g[idx])})
    sup = affine_support(g)
    if sup is None:
        return AffineAnalysis(
            False, reason="support is not an affine subspace",
            witness={"support": tuple(sorted(g.support()))})
    comp = compress(g, sup.free)
    poly = z4_polynomial(comp)
    k = len(sup.free)
    for mask, c in poly.coefficients:
        deg = mask.bit_count()
        positions = tuple(sup.free[j] for j in range(k)
                          if (mask >> (k - 1 - j)) & 1)
        if deg > 2:
            return AffineAnalysis(
                False, support=sup, polynomial=poly,
                reason="phase polynomial has degree above two",
                witness={"monomial": positions, "coefficient": c})
        if deg == 2 and c % 2:
            return AffineAnalysis(
                False, support=sup, polynomial=poly,
                reason="phase polynomial has an odd cross term",
                witness={"monomial": positions, "coefficient": c})
    return AffineAnalysis(True, scale=lam, support=sup, polynomial=poly)


# -- matching identities ------------------------------------------------------


@dataclass(frozen=True)
class MatchgateAnalysis:
    member: bool
    parity: str
    reason: str | None = None
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.member


def is_matchgate(f: Signature) -> MatchgateAnalysis:
    """Parity condition plus the full matching-identity scan.

    The scan runs patterns in ascending order and position vectors in
    (length, lexicographic) order, so the reported witness is the first
    violated identity in that order.  The identities imply the parity
    condition, but checking parity first gives cheaper witnesses.
    """
    par = parity_of(f)
    if par == "none":
        evens = [i for i in sorted(f.support()) if i.bit_count() % 2 == 0]
        odds = [i for i in sorted(f.support()) if i.bit_count() % 2 == 1]
        return MatchgateAnalysis(False, par,
                                 reason="support mixes parities",
                                 witness={"even": evens[0], "odd": odds[0]})
    n = f.arity
    vals = f.values
    ebits = [0] + [1 << (n - p) for p in range(1, n + 1)]
    for alpha in range(1 << n):
        for ell in range(1, n + 1):
            for pvec in itertools.combinations(range(1, n + 1), ell):
                pmask = 0
                for p in pvec:
                    pmask |= ebits[p]
                acc = ZERO
                shifted = alpha ^ pmask
                for j, p in enumerate(pvec):
                    a = vals[alpha ^ ebits[p]]
                    if not a:
                        continue
                    b = vals[shifted ^ ebits[p]]
                    if not b:
                        continue
                    term = a * b
                    acc = acc - term if j % 2 == 0 else acc + term
                if acc:
                    return MatchgateAnalysis(
                        False, par, reason="matching identity violated",
                        witness={"pattern": alpha, "positions": pvec,
                                 "value": str(acc)})
    return MatchgateAnalysis(True, par)


# -- transformed families -----------------------------------------------------


@dataclass(frozen=True)
class TwistedMembership:
    member: bool
    twist: Scalar | None = None
    inner: object = None

    def __bool__(self) -> bool:
        return self.member


def is_hadamard_matchgate(f: Signature) -> MatchgateAnalysis:
    """Does f become a matchgate after a Hadamard change of basis?

    H2 is self-inverse up to a factor of 2 and the matchgate conditions
    are scale-invariant, so testing the forward image suffices.
    """
    return is_matchgate(apply_matrix(f, H2))


def is_twisted_affine(f: Signature) -> TwistedMembership:
    """Is diag(1,w)^-1 f affine for some w with w^4 = -1?

    Only w = zeta8 and w = zeta8^3 need checking: any such diag factors
    through diag(1,-1), which preserves the affine family.
    """
    for w in (zeta_power(1), zeta_power(3)):
        inner = is_affine(scale_by_weight(f, w.inverse()))
        if inner:
            return TwistedMembership(True, w, inner)
    return TwistedMembership(False)


def is_twisted_hadamard_matchgate(f: Signature) -> TwistedMembership:
    """Is diag(1,w)^-1 f a Hadamard matchgate for some w with w^2 = -1?"""
    for w in (I, -I):
        inner = is_hadamard_matchgate(scale_by_weight(f, w.inverse()))
        if inner:
            return TwistedMembership(True, w, inner)
    return TwistedMembership(False)


# -- combined report ----------------------------------------------------------


@dataclass(frozen=True)
class ClassReport:
    parity: str
    degenerate: bool
    product: bool
    affine: bool
    matchgate: bool
    hadamard_matchgate: bool
    twisted_affine: bool
    twisted_hadamard_matchgate: bool
    details: dict = field(compare=False, repr=False, default_factory=dict)

    def memberships(self) -> dict:
        return {
            "degenerate": self.degenerate,
            "product": self.product,
            "affine": self.affine,
            "matchgate": self.matchgate,
            "hadamard_matchgate": self.hadamard_matchgate,
            "twisted_affine": self.twisted_affine,
            "twisted_hadamard_matchgate": self.twisted_hadamard_matchgate,
        }


def class_report(f: Signature) -> ClassReport:
    """Run every membership test on f and collect the analyses."""
    degenerate, factors = is_degenerate(f)
    product = is_product(f)
    affine = is_affine(f)
    matchgate = is_matchgate(f)
    hat = is_hadamard_matchgate(f)
    taff = is_twisted_affine(f)
    that = is_twisted_hadamard_matchgate(f)
    return ClassReport(
        parity=parity_of(f),
        degenerate=degenerate,
        product=bool(product),
        affine=bool(affine),
        matchgate=bool(matchgate),
        hadamard_matchgate=bool(hat),
        twisted_affine=bool(taff),
        twisted_hadamard_matchgate=bool(that),
        details={
            "degenerate_factors": factors,
            "product": product,
            "affine": affine,
            "matchgate": matchgate,
            "hadamard_matchgate": hat,
            "twisted_affine": taff,
            "twisted_hadamard_matchgate": that,
        },
    )
