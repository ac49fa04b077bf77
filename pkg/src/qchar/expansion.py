"""Single-node expansions, the monomial generation process and the
Frenkel-Mukhin closure.

``expand_Li`` pushes the rank-1 closed forms through a chosen node: restrict
an i-dominant monomial to its Y_i content (one rank-1 lattice per residue
class of the power modulo r_i), take the simple rank-1 character, and map
each rank-1 root step A_{q^t}^{-1} back to A_{i,q^{...}}^{-1}.

``generate_process`` grows a set of monomials certified to occur in the
character of the simple module L(m): starting from a dominant m, any
generated monomial that is i-dominant and is not already accounted for by
the node-i expansion of a strictly greater generated monomial may itself be
expanded at i, and everything in its expansion occurs.  Every generated
monomial carries a replayable chain of (node, root, result) steps.

``fm_algorithm`` runs the Frenkel-Mukhin closure: assuming the character of
L(m) has no second dominant monomial, lower multiplicities are forced class
by class (a class is an orbit of one node's root lattice) by greedily
decomposing the settled class content into rank-1 simple characters from
the top.  Forcing a second dominant monomial refutes the assumption; the
refutation is then certified with a generation-process chain.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from . import sl2
from .cartan import CartanData
from .monomials import (
    AWitness,
    Monomial,
    a_monomial,
    format_monomial,
    monomial_from_json,
    monomial_to_json,
)

SPECIAL_FM_CONSISTENT = "SpecialFMConsistent"
NOT_SPECIAL = "NotSpecial"
INCONCLUSIVE = "Inconclusive"

DEFAULT_FM_STEPS = 200_000
DEFAULT_PROCESS_STEPS = 100_000


class QCharacter:
    """Finite multiset of monomials with positive integer multiplicities."""

    __slots__ = ("terms", "highest")

    def __init__(self, terms, highest=None):
        self.terms = {m: t for m, t in terms.items() if t}
        if any(t < 0 for t in self.terms.values()):
            raise ValueError("multiplicities must be positive")
        self.highest = highest

    def multiplicity(self, m: Monomial) -> int:
        return self.terms.get(m, 0)

    def __contains__(self, m):
        return m in self.terms

    def __len__(self):
        """Number of distinct monomials."""
        return len(self.terms)

    def dimension(self) -> int:
        """Total multiplicity."""
        return sum(self.terms.values())

    def items_sorted(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].key)

    def dominant_monomials(self):
        return sorted((m for m in self.terms if m.is_dominant()),
                      key=lambda m: m.key)

    def __eq__(self, other):
        return isinstance(other, QCharacter) and self.terms == other.terms

    def __repr__(self):
        return f"QCharacter({len(self.terms)} monomials, dim {self.dimension()})"

    def to_text(self) -> str:
        parts = []
        for m, t in self.items_sorted():
            s = format_monomial(m)
            parts.append(s if t == 1 else f"{t}*{s}")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {
            "highest": monomial_to_json(self.highest) if self.highest else None,
            "terms": [{"monomial": monomial_to_json(m), "multiplicity": t}
                      for m, t in self.items_sorted()],
        }

    @classmethod
    def from_json(cls, data) -> "QCharacter":
        terms = {}
        for entry in data["terms"]:
            m = monomial_from_json(entry["monomial"])
            terms[m] = terms.get(m, 0) + int(entry["multiplicity"])
        highest = monomial_from_json(data["highest"]) if data.get("highest") else None
        return cls(terms, highest=highest)


def qchar_is_thin(chi: QCharacter) -> bool:
    """True iff every multiplicity equals 1."""
    return all(t == 1 for t in chi.terms.values())


def expand_Li_steps(c: CartanData, m: Monomial, i) -> dict:
    """Node-i expansion with bookkeeping: maps each result monomial to
    (multiplicity, root-step table {(i, power): count})."""
    if not m.is_dominant([i]):
        raise ValueError(f"monomial {format_monomial(m)} is not {i}-dominant")
    ri = c.r(i)
    classes = {}
    for s, e in m.node_powers(i).items():
        c0 = s % ri
        classes.setdefault(c0, {})[(s - c0) // ri] = e

    combos = [({}, 1)]
    for c0 in sorted(classes):
        restriction = sl2.Sl2Monomial(classes[c0])
        char = sl2.simple_qchar_sl2(restriction)
        opts = []
        for mu, t in sorted(char.items(), key=lambda kv: kv[0].key):
            steps = sl2.sl2_divide(mu, restriction)
            opts.append(({(i, c0 + ri * p): x for p, x in steps.items()}, t))
        merged = []
        for s1, t1 in combos:
            for s2, t2 in opts:
                s = dict(s1)
                s.update(s2)  # residue classes use disjoint powers
                merged.append((s, t1 * t2))
        combos = merged

    out = {}
    for steps, t in combos:
        mm = m
        for (_, p), x in steps.items():
            mm = mm * (a_monomial(c, i, p) ** (-x))
        prev = out.get(mm)
        out[mm] = (t if prev is None else prev[0] + t, steps)
    return out


def expand_Li(c: CartanData, m: Monomial, i) -> QCharacter:
    """Expansion of an i-dominant monomial through node i.

    The result is m times the mapped simple rank-1 character of the node-i
    restriction; its highest monomial is m with multiplicity 1.
    """
    return QCharacter({mm: t for mm, (t, _) in expand_Li_steps(c, m, i).items()},
                      highest=m)


def _witness_plus(w: AWitness, steps: dict) -> AWitness:
    v = dict(w.v)
    for k, x in steps.items():
        v[k] = v.get(k, 0) + x
    return AWitness(v)


@dataclass(frozen=True)
class TraceStep:
    """One expansion step: ``result`` occurs in the node-``node`` expansion
    of ``root``."""

    node: int
    root: Monomial
    result: Monomial

    def to_json(self) -> dict:
        return {"node": self.node,
                "root": monomial_to_json(self.root),
                "result": monomial_to_json(self.result)}


@dataclass
class GenerationTrace:
    """Monomials generated from a dominant start, each with a replayable chain."""

    start: Monomial
    chains: dict = field(default_factory=dict)  # Monomial -> tuple[TraceStep]
    partial: bool = False
    steps: int = 0

    def monomials(self):
        return sorted(self.chains, key=lambda m: m.key)

    def dominant_monomials(self):
        """Dominant generated monomials other than the start."""
        return sorted((m for m in self.chains
                       if m != self.start and m.is_dominant()),
                      key=lambda m: m.key)

    def __contains__(self, m):
        return m in self.chains

    def replay(self, c: CartanData) -> bool:
        """Re-run every chain: each root must be node-dominant and each
        result must occur in the recorded expansion."""
        cache = {}
        for m, chain in self.chains.items():
            cur = self.start
            for step in chain:
                if step.root != cur or not step.root.is_dominant([step.node]):
                    return False
                key = (step.root, step.node)
                ch = cache.get(key)
                if ch is None:
                    ch = expand_Li(c, step.root, step.node)
                    cache[key] = ch
                if step.result not in ch:
                    return False
                cur = step.result
            if cur != m:
                return False
        return True

    def to_json(self) -> dict:
        gen = []
        for m in self.monomials():
            gen.append({"monomial": monomial_to_json(m),
                        "chain": [s.to_json() for s in self.chains[m]]})
        return {"start": monomial_to_json(self.start),
                "generated": gen,
                "partial": self.partial,
                "steps": self.steps}


def _cross_key(w: AWitness, i):
    """Witness entries away from node i; constant on one node-i root orbit."""
    return tuple(kv for kv in w.key if kv[0][0] != i)


def generate_process(c: CartanData, m: Monomial,
                     budget: int = DEFAULT_PROCESS_STEPS,
                     stop_on_dominant: bool = False) -> GenerationTrace:
    """Closure of {m} under admissible single-node expansions.

    A generated monomial m' may be expanded at node i when it is i-dominant
    and no strictly greater generated monomial already yields m' in its own
    node-i expansion (checked against the set generated so far; each chain
    step records that the check held when taken).  Work proceeds in
    ascending order of the witness total against m, ties broken by the
    canonical encoding, so runs are reproducible.
    """
    if not m.is_dominant():
        raise ValueError("generation starts from a dominant monomial")
    chains = {m: ()}
    wit = {m: AWitness({})}
    orbits = {i: {} for i in c.nodes}  # cross-key -> [monomial]
    for i in c.nodes:
        orbits[i].setdefault(_cross_key(wit[m], i), []).append(m)
    expand_cache = {}
    heap = [(0, m.key, m)]
    done = set()
    steps = 0
    partial = False
    stop = False

    def expansion(root, i):
        key = (root, i)
        ch = expand_cache.get(key)
        if ch is None:
            ch = expand_Li_steps(c, root, i)
            expand_cache[key] = ch
        return ch

    def blocked(mu, i):
        w_mu = wit[mu]
        for other in orbits[i].get(_cross_key(w_mu, i), ()):
            if other == mu:
                continue
            diff = dict(w_mu.v)
            for k, x in wit[other].items():
                diff[k] = diff.get(k, 0) - x
            if any(x < 0 for x in diff.values()) or not any(diff.values()):
                continue
            if not other.is_dominant([i]):
                continue
            if mu in expansion(other, i):
                return True
        return False

    while heap and not stop:
        _, _, mu = heapq.heappop(heap)
        if mu in done:
            continue
        done.add(mu)
        for i in c.nodes:
            if not mu.is_dominant([i]):
                continue
            if blocked(mu, i):
                continue
            if steps >= budget:
                partial = True
                stop = True
                break
            steps += 1
            char = expansion(mu, i)
            for nu in sorted(char, key=lambda x: x.key):
                if nu in chains:
                    continue
                chains[nu] = chains[mu] + (TraceStep(i, mu, nu),)
                w = _witness_plus(wit[mu], char[nu][1])
                wit[nu] = w
                for j in c.nodes:
                    orbits[j].setdefault(_cross_key(w, j), []).append(nu)
                heapq.heappush(heap, (w.total(), nu.key, nu))
                if stop_on_dominant and nu != m and nu.is_dominant():
                    stop = True
            if stop:
                break
    return GenerationTrace(start=m, chains=chains, partial=partial, steps=steps)


@dataclass
class SpecialnessReport:
    """Outcome of the closure on one dominant monomial.

    ``NotSpecial`` always carries a dominant witness strictly below the
    subject together with a replayable generation chain; ``Inconclusive``
    carries a diagnostic (budget exhaustion or a closure inconsistency).
    """

    verdict: str
    subject: Monomial
    qchar: QCharacter | None = None
    witness: Monomial | None = None
    chain: tuple = ()
    steps: int = 0
    diagnostic: str | None = None

    def to_json(self) -> dict:
        out = {"verdict": self.verdict,
               "subject": monomial_to_json(self.subject),
               "steps": self.steps}
        if self.qchar is not None:
            out["qchar"] = self.qchar.to_json()
        if self.witness is not None:
            out["witness"] = monomial_to_json(self.witness)
            out["chain"] = [s.to_json() for s in self.chain]
        if self.diagnostic:
            out["diagnostic"] = self.diagnostic
        return out


def _certify_not_special(c, m, forced, steps, process_budget):
    trace = generate_process(c, m, budget=process_budget, stop_on_dominant=True)
    doms = trace.dominant_monomials()
    if not doms:
        return SpecialnessReport(
            INCONCLUSIVE, m, steps=steps,
            diagnostic=("closure forces dominant monomial "
                        f"{format_monomial(forced)} but the generation process "
                        "found no replayable witness within budget"))
    witness = forced if forced in trace.chains else doms[0]
    return SpecialnessReport(NOT_SPECIAL, m, witness=witness,
                             chain=trace.chains[witness], steps=steps)


def fm_algorithm(c: CartanData, m: Monomial,
                 budget: int = DEFAULT_FM_STEPS,
                 process_budget: int = DEFAULT_PROCESS_STEPS,
                 order_within_level=None) -> SpecialnessReport:
    """Frenkel-Mukhin closure for the character of L(m), m dominant.

    The worklist is ordered by ascending witness total against m, ties by
    canonical encoding (``order_within_level`` lets tests permute the tie
    order with any injective key to exercise the order-independence
    contract).  Settling a monomial re-derives each of its node classes:
    the settled class content, restricted to the node, must decompose as a
    nonnegative combination of rank-1 simple characters taken greedily from
    the top; the combination forces multiplicities for everything below.
    A new monomial's multiplicity is the maximum of its forced
    multiplicities over the nodes.  A forced dominant monomial other than m
    refutes the single-dominant hypothesis and is certified via the
    generation process.
    """
    if not m.is_dominant():
        raise ValueError("the closure starts from a dominant monomial")
    mult = {m: 1}
    wit = {m: AWitness({})}
    settled = set()
    class_members = {i: {} for i in c.nodes}
    class_forced = {i: {} for i in c.nodes}
    expand_cache = {}
    steps = 0

    def tie_key(nu):
        return order_within_level(nu) if order_within_level else nu.key

    def expansion(root, i):
        key = (root, i)
        ch = expand_cache.get(key)
        if ch is None:
            ch = expand_Li_steps(c, root, i)
            expand_cache[key] = ch
        return ch

    def inconclusive(msg):
        return SpecialnessReport(INCONCLUSIVE, m, steps=steps, diagnostic=msg)

    heap = [(0, tie_key(m), m)]
    while heap:
        _, _, mu = heapq.heappop(heap)
        if mu in settled:
            continue
        if steps >= budget:
            return inconclusive("step budget exhausted")
        steps += 1
        settled.add(mu)
        w_mu = wit[mu]
        for i in c.nodes:
            ck = _cross_key(w_mu, i)
            members = class_members[i].setdefault(ck, [])
            members.append(mu)
            cached = class_forced[i].get(ck)
            if cached is not None and cached.get(mu, 0) == mult[mu]:
                continue  # this class already explains mu at its multiplicity
            if not any(j == i for (j, _), _ in mu.key):
                # no Y_i content: mu explains itself and forces nothing new
                if cached is not None and cached.get(mu, 0) > mult[mu]:
                    return inconclusive(
                        f"node-{i} class over-explains {format_monomial(mu)}")
                class_forced[i].setdefault(ck, {})[mu] = mult[mu]
                continue

            order = sorted(members, key=lambda x: (wit[x].total(), x.key))
            rem = {nu: mult[nu] for nu in order}
            forced = {}
            for top in order:
                coeff = rem[top]
                if coeff == 0:
                    continue
                if coeff < 0:
                    return inconclusive(
                        f"node-{i} class over-explains {format_monomial(top)}")
                if not top.is_dominant([i]):
                    return inconclusive(
                        f"node-{i} class leaves non-dominant "
                        f"{format_monomial(top)} unexplained")
                w_top = wit[top]
                for nu, (t, steps_tbl) in expansion(top, i).items():
                    forced[nu] = forced.get(nu, 0) + coeff * t
                    if nu in rem:
                        rem[nu] -= coeff * t
                    if nu not in wit:
                        wit[nu] = _witness_plus(w_top, steps_tbl)
            if any(rem.values()):
                return inconclusive(f"node-{i} class content not exhausted")
            class_forced[i][ck] = forced

            for nu in sorted(forced, key=lambda x: x.key):
                f = forced[nu]
                if nu in settled:
                    if f != mult[nu]:
                        return inconclusive(
                            f"settled multiplicity of {format_monomial(nu)} "
                            f"revised by node {i}")
                    continue
                old = mult.get(nu, 0)
                if f > old:
                    mult[nu] = f
                if old == 0:
                    heapq.heappush(heap, (wit[nu].total(), tie_key(nu), nu))
                    if nu != m and nu.is_dominant():
                        return _certify_not_special(c, m, nu, steps,
                                                    process_budget)

    return SpecialnessReport(SPECIAL_FM_CONSISTENT, m,
                             qchar=QCharacter(mult, highest=m), steps=steps)
