"""Both computation paths for the class function attached to a CM type, and
exact checkers for the structural identities relating them.

The brute path convolves the CM-type indicator with its reflex and projects
to classes; the closed-form path assembles the same class function from the
trace, the permutation character, and conjugated double-coset counts.  The
two are compared coefficient-by-coefficient with zero tolerance.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import BruteCapExceeded
from .galois_model import CMType, UnitaryGaloisModel, act
from .group_algebra import (
    BRUTE_CAP,
    AlgebraElement,
    ClassFunction,
    class_project,
    convolve,
    evaluate,
    reflex,
)

DOUBLE_LOOP_CAP = 2_000_000  # |G| * h limit for the literal double loop
SAMPLE_EXHAUSTIVE_LIMIT = 500  # enumerate all size-eps subsets up to this count
SAMPLE_SIZE = 100  # seeded sample size above the limit


@dataclass
class IdentityReport:
    """Outcome of one identity check; a witness pins the first failure."""

    name: str
    passed: bool
    witness: dict | None = None
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"name": self.name,
               "status": "pass" if self.passed else "fail"}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.detail:
            out["detail"] = self.detail
        return out


def trace_element(model: UnitaryGaloisModel) -> AlgebraElement:
    """Formal sum of all (g, 0): the trace of the big field over the
    imaginary quadratic subfield, as a group-algebra element."""
    return AlgebraElement(model.group,
                          {(g, 0): 1 for g in range(model.group.order)})


def cm_type_element(phi: CMType, model: UnitaryGaloisModel) -> AlgebraElement:
    """Indicator of the CM type on Gamma: bit 1 on the cosets in the subset,
    bit 0 elsewhere; total mass hn."""
    members = set(phi.indices)
    coset_of = model.cosets.coset_of
    return AlgebraElement(
        model.group,
        {(g, 1 if int(coset_of[g]) in members else 0): 1
         for g in range(model.group.order)})


def reflex_convolution(phi: CMType, model: UnitaryGaloisModel,
                       brute_cap: int = BRUTE_CAP) -> AlgebraElement:
    """Normalized convolution of the CM type with its reflex (brute path)."""
    if model.gamma_order > brute_cap:
        raise BruteCapExceeded(
            f"|Gamma| = {model.gamma_order} exceeds brute cap {brute_cap}")
    elt = cm_type_element(phi, model)
    return convolve(elt, reflex(elt)).scale(Fraction(1, model.gamma_order))


def cm_class_function_brute(phi: CMType, model: UnitaryGaloisModel,
                            brute_cap: int = BRUTE_CAP) -> ClassFunction:
    """Class projection of the reflex convolution (definition-level path)."""
    return class_project(reflex_convolution(phi, model, brute_cap), model.classes)


def permutation_character(model: UnitaryGaloisModel) -> ClassFunction:
    """Fixed-coset counts of the coset action, on the bit-0 classes."""
    if "perm_char" not in model._cache:
        vals = []
        for rep in model.classes.class_reps:
            row = model.action[rep]
            fixed = int(sum(1 for i in range(model.n) if row[i] == i))
            vals.append([Fraction(fixed), Fraction(0)])
        model._cache["perm_char"] = ClassFunction(model.group, model.classes, vals)
    return model._cache["perm_char"]


def conjugate_subgroup_sum(model: UnitaryGaloisModel,
                           double_loop_cap: int = DOUBLE_LOOP_CAP) -> ClassFunction:
    """The function g -> #{x in G : g in x H x^-1}, computed from the raw
    definition (never through fixed-point counts), on the bit-0 classes.

    Small groups run the literal (x, eta) double loop; above the cap the same
    count runs per class representative over all conjugators.
    """
    if "conj_subgroup_sum" in model._cache:
        return model._cache["conj_subgroup_sum"]
    G = model.group
    classes = model.classes
    h_indices = model.cosets.subgroup_elements
    if G.order * len(h_indices) <= double_loop_cap:
        counts = [0] * G.order
        for x in range(G.order):
            xinv = G.inv(x)
            for eta in h_indices:
                counts[G.mul(G.mul(x, eta), xinv)] += 1
        for c, members in enumerate(classes.classes):
            first = counts[members[0]]
            assert all(counts[m] == first for m in members)
        vals = [[Fraction(counts[rep]), Fraction(0)]
                for rep in classes.class_reps]
    else:
        # count conjugators per class representative: x r x^-1 in H
        h_bytes = {G.images[i].tobytes() for i in h_indices}
        einv = G.inverse_images
        void = np.dtype((np.void, G.degree))
        vals = []
        for rep in classes.class_reps:
            xr = G.images[:, G.images[rep]]
            conj = np.take_along_axis(xr, einv, axis=1)
            uniq, counts = np.unique(
                np.ascontiguousarray(conj).view(void).ravel(), return_counts=True)
            total = sum(int(c) for u, c in zip(uniq, counts)
                        if u.tobytes() in h_bytes)
            vals.append([Fraction(total), Fraction(0)])
    out = ClassFunction(model.group, classes, vals)
    model._cache["conj_subgroup_sum"] = out
    return out


def compare_class_functions(name: str, lhs: ClassFunction, rhs: ClassFunction,
                            detail: dict | None = None,
                            context: dict | None = None) -> IdentityReport:
    """Exact classwise comparison; the witness is the lexicographically first
    offending (class, bit) with both values."""
    for c in range(lhs.classes.count):
        for bit in (0, 1):
            if lhs.values[c][bit] != rhs.values[c][bit]:
                witness = {"class_index": c, "bit": bit,
                           "lhs": str(lhs.values[c][bit]),
                           "rhs": str(rhs.values[c][bit])}
                if context:
                    witness.update(context)
                return IdentityReport(name, False, witness, detail or {})
    return IdentityReport(name, True, None, detail or {})


def check_induced_character(model: UnitaryGaloisModel) -> IdentityReport:
    """Conjugate-subgroup counts equal h times the permutation character."""
    lhs = conjugate_subgroup_sum(model)
    rhs = permutation_character(model).scale(model.h)
    return compare_class_functions("induced-character", lhs, rhs,
                                   detail={"classes": model.classes.count})


def _pair_class_counts(model: UnitaryGaloisModel, i: int, j: int) -> list[int]:
    """Per-class counts of sigma_i eta sigma_j^-1 over eta in H (i != j)."""
    cache = model._cache.setdefault("pair_counts", {})
    if (i, j) not in cache:
        G = model.group
        reps = model.cosets.reps
        h_rows = G.images[np.array(model.cosets.subgroup_elements, dtype=np.int64)]
        sj_inv = G.inverse_images[reps[j]]
        rows = G.images[reps[i]][h_rows[:, sj_inv]]  # sigma_i o eta o sigma_j^-1
        raw = rows.tobytes()
        d = G.degree
        counts = [0] * model.classes.count
        class_of = model.classes.class_of
        index = G._index
        for k in range(rows.shape[0]):
            e = index[raw[k * d:(k + 1) * d]]
            counts[class_of[e]] += 1
        cache[(i, j)] = counts
    return cache[(i, j)]


def cm_class_function_closed(phi: CMType, model: UnitaryGaloisModel) -> ClassFunction:
    """Closed-form path: half-trace, trace and permutation-character terms
    scaled by the signature, plus the conjugation-averaged double-coset term
    over ordered pairs of distinct subset members.  Valid beyond the brute
    cap."""
    small = len(phi.indices) <= 2
    cache = model._cache.setdefault("closed_small", {})
    if small and phi.indices in cache:
        return cache[phi.indices]
    n, h = model.n, model.h
    eps = phi.eps
    order = model.group.order
    chi = permutation_character(model)
    classes = model.classes
    k = classes.count
    tcounts = [0] * k
    for i in phi.indices:
        for j in phi.indices:
            if i != j:
                pc = _pair_class_counts(model, i, j)
                for c in range(k):
                    tcounts[c] += pc[c]
    vals = []
    for c in range(k):
        base = Fraction(eps, n) - Fraction(eps, n * n) * chi.values[c][0]
        conj_avg = Fraction(order * tcounts[c], h * n * n * classes.sizes[c])
        bit1 = base - conj_avg
        vals.append([Fraction(1, 2) - bit1, bit1])
    out = ClassFunction(model.group, classes, vals)
    if small:
        cache[phi.indices] = out
    return out


def sample_subsets(n: int, eps: int, rng: random.Random,
                   exhaustive_limit: int = SAMPLE_EXHAUSTIVE_LIMIT,
                   sample_size: int = SAMPLE_SIZE):
    """All size-eps subsets when there are at most ``exhaustive_limit``,
    otherwise ``sample_size`` distinct seeded samples.  Returns (subsets,
    exhaustive_flag)."""
    total = math.comb(n, eps)
    if total <= exhaustive_limit:
        return list(itertools.combinations(range(n), eps)), True
    chosen = set()
    while len(chosen) < sample_size:
        chosen.add(tuple(sorted(rng.sample(range(n), eps))))
    return sorted(chosen), False


def check_closed_form(model: UnitaryGaloisModel, eps_max: int | None = None,
                      seed: int = 0, brute_cap: int = BRUTE_CAP,
                      exhaustive_limit: int = SAMPLE_EXHAUSTIVE_LIMIT,
                      sample_size: int = SAMPLE_SIZE) -> IdentityReport:
    """Brute path equals closed-form path, exactly, for every sampled subset."""
    if model.gamma_order > brute_cap:
        raise BruteCapExceeded(
            f"|Gamma| = {model.gamma_order} exceeds brute cap {brute_cap}")
    if eps_max is None:
        eps_max = model.n
    rng = random.Random(seed)
    checked = 0
    sampled = []
    for eps in range(min(eps_max, model.n) + 1):
        subsets, exhaustive = sample_subsets(model.n, eps, rng,
                                             exhaustive_limit, sample_size)
        if not exhaustive:
            sampled.append(eps)
        for s in subsets:
            phi = CMType(s, model.n)
            brute = cm_class_function_brute(phi, model, brute_cap)
            closed = cm_class_function_closed(phi, model)
            checked += 1
            rep = compare_class_functions(
                "closed-form", brute, closed,
                context={"subset": [i + 1 for i in s]})
            if not rep.passed:
                rep.detail = {"subsets_checked": checked}
                return rep
    return IdentityReport("closed-form", True, None,
                          {"subsets_checked": checked, "sampled_eps": sampled})


def pair_reduction_residual(phi: CMType, model: UnitaryGaloisModel) -> ClassFunction:
    """Left side minus the pair/singleton/empty combination, closed path."""
    eps = phi.eps
    lhs = cm_class_function_closed(phi, model)
    rhs = ClassFunction.zero(model.group, model.classes)
    for pair in itertools.combinations(phi.indices, 2):
        rhs = rhs + cm_class_function_closed(CMType(pair, model.n), model)
    singles = ClassFunction.zero(model.group, model.classes)
    for i in phi.indices:
        singles = singles + cm_class_function_closed(CMType((i,), model.n), model)
    rhs = rhs - singles.scale(eps - 2)
    empty = cm_class_function_closed(CMType((), model.n), model)
    rhs = rhs + empty.scale(Fraction((eps - 1) * (eps - 2), 2))
    return lhs - rhs


def check_pair_reduction(model: UnitaryGaloisModel, phi: CMType) -> IdentityReport:
    residual = pair_reduction_residual(phi, model)
    zero = ClassFunction.zero(model.group, model.classes)
    return compare_class_functions(
        "pair-reduction", residual, zero,
        context={"subset": [i + 1 for i in phi.indices]})


def check_pair_reduction_suite(model: UnitaryGaloisModel,
                               eps_max: int | None = None, seed: int = 0,
                               exhaustive_limit: int = SAMPLE_EXHAUSTIVE_LIMIT,
                               sample_size: int = SAMPLE_SIZE) -> IdentityReport:
    if eps_max is None:
        eps_max = model.n
    rng = random.Random(seed)
    checked = 0
    for eps in range(min(eps_max, model.n) + 1):
        subsets, _ = sample_subsets(model.n, eps, rng,
                                    exhaustive_limit, sample_size)
        for s in subsets:
            rep = check_pair_reduction(model, CMType(s, model.n))
            checked += 1
            if not rep.passed:
                rep.detail = {"subsets_checked": checked}
                return rep
    return IdentityReport("pair-reduction", True, None,
                          {"subsets_checked": checked})


def check_cm0_membership(f: ClassFunction):
    """Return the constant f(g) + f(rho g) if it exists, else a witness dict.

    The class functions attached to CM types must give exactly 1/2.
    """
    constant = f.values[0][0] + f.values[0][1]
    for c in range(f.classes.count):
        s = f.values[c][0] + f.values[c][1]
        if s != constant:
            return None, {"class_index": c, "sum": str(s),
                          "expected": str(constant)}
    return constant, None


def check_cm0_suite(model: UnitaryGaloisModel, eps_max: int | None = None,
                    seed: int = 0, brute_cap: int = BRUTE_CAP,
                    exhaustive_limit: int = SAMPLE_EXHAUSTIVE_LIMIT,
                    sample_size: int = SAMPLE_SIZE,
                    members_per_class: int = 10) -> IdentityReport:
    """Every computed class function is rho-balanced at exactly 1/2 and is
    constant on classes under re-evaluation at random class members."""
    if eps_max is None:
        eps_max = model.n
    rng = random.Random(seed)
    checked = 0
    for eps in range(min(eps_max, model.n) + 1):
        subsets, _ = sample_subsets(model.n, eps, rng,
                                    exhaustive_limit, sample_size)
        for s in subsets:
            phi = CMType(s, model.n)
            fns = [cm_class_function_closed(phi, model)]
            if model.gamma_order <= brute_cap:
                fns.append(cm_class_function_brute(phi, model, brute_cap))
            for f in fns:
                checked += 1
                constant, witness = check_cm0_membership(f)
                if witness is not None or constant != Fraction(1, 2):
                    w = witness or {"constant": str(constant), "expected": "1/2"}
                    w["subset"] = [i + 1 for i in s]
                    return IdentityReport("cm0-membership", False, w)
                for c, members in enumerate(model.classes.classes):
                    picks = members if len(members) <= members_per_class else \
                        rng.sample(members, members_per_class)
                    for g in picks:
                        for bit in (0, 1):
                            if evaluate(f, (g, bit)) != f.values[c][bit]:
                                return IdentityReport(
                                    "cm0-membership", False,
                                    {"class_index": c, "element": g, "bit": bit,
                                     "subset": [i + 1 for i in s]})
    return IdentityReport("cm0-membership", True, None,
                          {"functions_checked": checked})


def check_galois_invariance(model: UnitaryGaloisModel, pairs: int = 50,
                            seed: int = 0,
                            eps_max: int | None = None) -> IdentityReport:
    """Equivalent CM types have equal class functions (closed path)."""
    if eps_max is None:
        eps_max = model.n
    rng = random.Random(seed)
    for _ in range(pairs):
        x = (rng.randrange(model.group.order), rng.randrange(2))
        eps = rng.randrange(min(eps_max, model.n) + 1)
        phi = CMType(tuple(rng.sample(range(model.n), eps)), model.n)
        moved = act(x, phi, model)
        rep = compare_class_functions(
            "galois-invariance",
            cm_class_function_closed(moved, model),
            cm_class_function_closed(phi, model),
            context={"subset": [i + 1 for i in phi.indices],
                     "gamma": [x[0], x[1]]})
        if not rep.passed:
            return rep
    return IdentityReport("galois-invariance", True, None, {"pairs": pairs})
