"""Complexity classification of counting CSPs by signature-set containment.

A finite signature set defines a counting problem: sum over all variable
assignments the product of the constraint values.  Its complexity is decided
entirely by which tractable families contain every member of the set.  The
classifiers here run the per-signature membership tests from
:mod:`holant.classes`, collect every family that holds jointly, and translate
the outcome into a verdict:

* :func:`classify_pl_csp` for planar instances, with three possible verdicts
  (the Hadamard-matchgate family is tractable only under planarity),
* :func:`classify_csp` for unrestricted instances (two verdicts),
* :func:`classify_pl_csp2_symmetric` for planar instances in which every
  variable appears an even number of times, where two extra twisted families
  become tractable and the test is defined for symmetric signatures only.

All verdicts carry the full list of holding containments plus, for every
family that failed, the first failing signature and what broke.  That makes a
"hard" verdict auditable and lets callers pick an evaluator when several
tractable families apply.  Hardness itself is not certified constructively;
the label records that no tractable containment holds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .classes import (
    is_affine,
    is_hadamard_matchgate,
    is_product,
    is_twisted_affine,
    is_twisted_hadamard_matchgate,
)
from .signatures import Signature

PTIME = "PTime"
PLANAR_PTIME_ONLY = "PlanarPTimeOnly"
SHARP_P_HARD = "SharpPHard"

_FAMILY_TESTS = {
    "affine": is_affine,
    "product": is_product,
    "hadamard_matchgate": is_hadamard_matchgate,
    "twisted_affine": is_twisted_affine,
    "twisted_hadamard_matchgate": is_twisted_hadamard_matchgate,
}


@dataclass(frozen=True)
class DichotomyVerdict:
    """Outcome of a classification run.

    ``category`` is one of ``"PTime"``, ``"PlanarPTimeOnly"`` or
    ``"SharpPHard"``.  ``containments`` lists every tested family that
    contains the whole input set.  ``witnesses`` maps each failed family to
    the first counterexample: the signature, its position in the input, and
    the failure detail reported by the membership test.
    """

    category: str
    containments: tuple[str, ...]
    witnesses: dict = field(default_factory=dict)

    def holds(self, family: str) -> bool:
        return family in self.containments


def _as_signatures(collection) -> tuple[Signature, ...]:
    sigs = tuple(collection)
    for i, f in enumerate(sigs):
        if not isinstance(f, Signature):
            raise TypeError(f"entry {i} is not a Signature")
    return sigs


def _failure_detail(analysis) -> dict:
    detail = {}
    reason = getattr(analysis, "reason", None)
    if reason is not None:
        detail["reason"] = reason
    witness = getattr(analysis, "witness", None)
    if witness is not None:
        detail["witness"] = witness
    if not detail:
        # twisted tests report bare failures: every admissible twist was tried
        detail["reason"] = "no admissible twist works"
    return detail


def _joint_containments(sigs, families):
    """Test each family against every signature.

    Returns the holding family names (in the order given) and a witness map
    for the rest.  An empty input set is contained in everything.
    """
    holding = []
    witnesses = {}
    for name in families:
        test = _FAMILY_TESTS[name]
        culprit = None
        for i, f in enumerate(sigs):
            analysis = test(f)
            if not analysis:
                culprit = (i, f, analysis)
                break
        if culprit is None:
            holding.append(name)
        else:
            i, f, analysis = culprit
            witnesses[name] = {
                "index": i,
                "signature": f,
                **_failure_detail(analysis),
            }
    return tuple(holding), witnesses


def classify_pl_csp(signatures) -> DichotomyVerdict:
    """Classify the planar counting CSP defined by a finite signature set.

    ``PTime`` when the set lies in the affine or the product family (both
    tractable with or without planarity), ``PlanarPTimeOnly`` when only the
    Hadamard-matchgate containment holds, ``SharpPHard`` otherwise.
    """
    sigs = _as_signatures(signatures)
    holding, witnesses = _joint_containments(
        sigs, ("affine", "product", "hadamard_matchgate"))
    if "affine" in holding or "product" in holding:
        category = PTIME
    elif "hadamard_matchgate" in holding:
        category = PLANAR_PTIME_ONLY
    else:
        category = SHARP_P_HARD
    return DichotomyVerdict(category, holding, witnesses)


def classify_csp(signatures) -> DichotomyVerdict:
    """Classify the counting CSP without a planarity restriction.

    Only the affine and product families are tractable here, so the verdict
    is two-valued: ``PTime`` or ``SharpPHard``.
    """
    sigs = _as_signatures(signatures)
    holding, witnesses = _joint_containments(sigs, ("affine", "product"))
    category = PTIME if holding else SHARP_P_HARD
    return DichotomyVerdict(category, holding, witnesses)


def classify_pl_csp2_symmetric(signatures) -> DichotomyVerdict:
    """Classify the planar counting CSP whose variables all have even degree.

    Five families are tractable in this setting: product, affine, twisted
    affine, Hadamard matchgates, and twisted Hadamard matchgates.  The
    verdict is ``PTime`` when any of them contains the whole set and
    ``SharpPHard`` otherwise.  Defined for symmetric signatures only;
    asymmetric input raises ValueError.
    """
    sigs = _as_signatures(signatures)
    for i, f in enumerate(sigs):
        if f.symmetric_entries() is None:
            raise ValueError(f"signature {i} is not symmetric")
    holding, witnesses = _joint_containments(
        sigs,
        ("product", "affine", "twisted_affine",
         "hadamard_matchgate", "twisted_hadamard_matchgate"))
    category = PTIME if holding else SHARP_P_HARD
    return DichotomyVerdict(category, holding, witnesses)
