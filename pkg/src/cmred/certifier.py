"""Galois-orbit tables for CM types and the double-transitivity certificate.

The bit-0 part of Gamma preserves the signature and acts through the coset
action; the full group additionally complements subsets (rho).  A Gamma orbit
therefore joins a subset orbit with the complement of that orbit, which lands
in the stratum of complementary size.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .galois_model import UnitaryGaloisModel
from .permgroup import is_k_transitive, orbits_on_subsets


@dataclass
class StratumOrbits:
    """Orbit data for one subset size under one group choice."""

    count: int
    sizes: list
    reps: list  # canonical representatives as sorted index tuples

    def to_dict(self):
        return {"count": self.count, "sizes": self.sizes,
                "reps": [list(r) for r in self.reps]}


@dataclass
class OrbitTable:
    """Per-size orbit statistics under the signature-preserving group (bit 0)
    and under the full group including rho.

    Full-group reps may live in the complementary stratum; equal reps across
    the two strata identify merged orbits.
    """

    n: int
    entries: dict  # eps -> {"bit0": StratumOrbits, "full": StratumOrbits}

    def to_dict(self):
        return {str(eps): {k: v.to_dict() for k, v in entry.items()}
                for eps, entry in sorted(self.entries.items())}


def orbit_table(model: UnitaryGaloisModel, eps_max: int) -> OrbitTable:
    """Orbits of CM types for every size up to ``eps_max``."""
    n = model.n
    rows = model.generator_action_rows
    entries = {}
    for eps in range(min(eps_max, n) + 1):
        orbits = orbits_on_subsets(rows, n, eps)
        bit0 = StratumOrbits(len(orbits), [len(o) for o in orbits],
                             [o[0] for o in orbits])
        if 2 * eps != n:
            # rho moves this stratum wholesale to size n - eps: within the
            # stratum the partition is unchanged, but the canonical rep of
            # the merged orbit may be the complement-side one when shorter
            full_reps = []
            for o in orbits:
                comp_members = [tuple(sorted(set(range(n)) - set(s))) for s in o]
                full_reps.append(min([o[0]] + comp_members,
                                     key=lambda t: (len(t), t)))
            full = StratumOrbits(len(orbits), [len(o) for o in orbits], full_reps)
        else:
            # self-complementary stratum: orbits pair with the orbit of the
            # complement and may merge
            rep_to_orbit = {}
            for k, o in enumerate(orbits):
                for s in o:
                    rep_to_orbit[s] = k
            merged_of = {}
            merged = []
            for k, o in enumerate(orbits):
                if k in merged_of:
                    continue
                comp = tuple(sorted(set(range(n)) - set(o[0])))
                partner = rep_to_orbit[comp]
                members = sorted(set(o) | set(orbits[partner]))
                merged_of[k] = merged_of[partner] = len(merged)
                merged.append(members)
            full = StratumOrbits(len(merged), [len(o) for o in merged],
                                 [o[0] for o in merged])
        entries[eps] = {"bit0": bit0, "full": full}
    return OrbitTable(n, entries)


CRITERION_MET_TEXT = (
    "Certified: the group acts 2-transitively on the cosets of the "
    "subgroup, so CM types of each signature with at most two conjugated "
    "places form a single Galois orbit and the double-transitivity "
    "criterion applies to every CM type of the corresponding unitary CM "
    "field. This certificate checks the group-theoretic hypotheses only."
)
CRITERION_NOT_MET_TEXT = (
    "Not certified: the action on cosets is not 2-transitive, so the "
    "double-transitivity criterion does not apply. This is not evidence "
    "against the conjecture; the criterion is sufficient, not necessary."
)


@dataclass
class ColmezCertificate:
    """Machine-readable conclusion of the double-transitivity criterion."""

    two_transitive: bool
    pair_orbit_count: int
    orbit_counts: dict  # eps in {0,1,2} -> bit-0 orbit count
    criterion_met: bool
    statement: str = field(default="")

    def to_dict(self):
        return {
            "two_transitive": self.two_transitive,
            "pair_orbit_count": self.pair_orbit_count,
            "orbit_counts": {str(k): v for k, v in sorted(self.orbit_counts.items())},
            "criterion_met": self.criterion_met,
            "statement": self.statement,
        }


def certify(model: UnitaryGaloisModel) -> ColmezCertificate:
    """Run the 2-transitivity test and the small-stratum orbit counts."""
    n = model.n
    rows = model.generator_action_rows
    if n >= 2:
        two_transitive, pair_orbits = is_k_transitive(rows, n, 2)
    else:
        two_transitive, pair_orbits = False, 0
    table = orbit_table(model, min(2, n))
    counts = {eps: table.entries[eps]["bit0"].count
              for eps in range(min(2, n) + 1)}
    met = two_transitive
    return ColmezCertificate(
        two_transitive=two_transitive,
        pair_orbit_count=pair_orbits,
        orbit_counts=counts,
        criterion_met=met,
        statement=CRITERION_MET_TEXT if met else CRITERION_NOT_MET_TEXT,
    )
