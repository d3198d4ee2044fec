"""The acceptance suite: exhaustive property checks on small corpora.

Each criterion returns a :class:`CriterionResult`.  Failures keep a few
concrete counterexamples in ``failures`` so a red result can be read
without rerunning anything.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from collections.abc import Callable
from dataclasses import asdict, dataclass, field

from iforge.coding import (
    CANTOR,
    SWAPPED,
    Pairing,
    even_subsequence,
    extension_bound,
    extension_length,
    relevant_pair,
)
from iforge.corpus import g3, t_code_kit
from iforge.errors import ContractError
from iforge.morphisms import MorphKind, MorphismWitness, naive_search, search, verify
from iforge.quotients import FinPartition, check_classwise_iso, sb_bijection
from iforge.structures import Structure
from iforge.sums import assemble_w, decompose_parity, enumerate_g, split_parts
from iforge.trees import (
    TruncSpec,
    build_r,
    build_t,
    embed_universal_t,
    extract_iso_t,
    induced_code,
    lift_iso,
    r_spec,
    weak_epi_r,
)

DEFAULT_SEED = 20240601
MAX_FAILURES = 8


@dataclass
class SuiteOptions:
    seed: int = DEFAULT_SEED
    t_maxlen: int = 4
    r_maxlen: int = 2
    universal_maxlen: int = 3
    kit_maxlen: int = 3
    sb_instances: int = 200


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    instances: int
    seconds: float
    detail: str = ""
    failures: list[str] = field(default_factory=list)

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        text = f"{verdict} {self.number} {self.name}: {self.instances} instances, {self.seconds:.2f}s"
        return f"{text}; {self.detail}" if self.detail else text

    def to_doc(self) -> dict:
        return asdict(self)


class _Tally:
    def __init__(self):
        self.instances = 0
        self.bad = 0
        self.failures: list[str] = []
        self.outcomes: list[bool] = []

    def check(self, ok: bool, what: Callable[[], str]) -> bool:
        self.instances += 1
        self.outcomes.append(ok)
        if not ok:
            self.bad += 1
            if len(self.failures) < MAX_FAILURES:
                self.failures.append(what())
        return ok


def _name(i: int) -> str:
    x = g3()[i]
    return f"G3[{i}](n={len(x)}, edges={sorted(p for p in x.rel('edge') if p[0] < p[1])})"


# ------------------------------------------------------------------ criteria


def oracle(opts: SuiteOptions) -> _Tally:
    t = _Tally()
    graphs = g3()
    for (i, a), (j, b) in itertools.product(enumerate(graphs), repeat=2):
        for kind in MorphKind:
            got, want = search(a, b, kind), naive_search(a, b, kind)
            t.check(got == want, lambda: f"{kind.value} {_name(i)} -> {_name(j)}: {got} vs {want}")
    return t


def _graph_verifies(x: Structure, y: Structure, w: MorphismWitness) -> bool:
    try:
        return verify(x, y, w)
    except ContractError:
        return False


def tcode(opts: SuiteOptions, pairing: Pairing = CANTOR) -> _Tally:
    t = _Tally()
    spec = TruncSpec(opts.t_maxlen, 3)
    graphs = g3()
    codes = [build_t(x, spec, pairing).structure for x in graphs]
    for (i, x), (j, y) in itertools.product(enumerate(graphs), repeat=2):
        sigma = search(x, y, MorphKind.ISOMORPHISM)
        tau = search(codes[i], codes[j], MorphKind.ISOMORPHISM)
        t.check(
            (sigma is None) == (tau is None),
            lambda: f"{_name(i)} vs {_name(j)}: graph iso {sigma is not None}, code iso {tau is not None}",
        )
        if sigma is not None:
            lifted = lift_iso("T", x, y, sigma, spec, pairing)
            t.check(verify(codes[i], codes[j], lifted), lambda: f"lift of {_name(i)} -> {_name(j)} fails")
        if tau is not None:
            back = extract_iso_t(x, y, tau, spec, pairing)
            t.check(
                _graph_verifies(x, y, back),
                lambda: f"extracted map {dict(back.map)} for {_name(i)} -> {_name(j)} is not a graph iso",
            )
    return t


def universal(opts: SuiteOptions, pairing: Pairing = CANTOR) -> _Tally:
    t = _Tally()
    spec = TruncSpec(opts.universal_maxlen, 3)
    graphs = g3()
    for i, x in enumerate(graphs):
        source = build_t(x, spec, pairing).structure
        for j, y in enumerate(graphs):
            w, target_spec, images = embed_universal_t(x, y, spec, pairing)
            target = induced_code("T", y, target_spec, images.values(), pairing)
            t.check(verify(source, target, w), lambda: f"universal embedding {_name(i)} into {_name(j)} fails")
    return t


def rcode(opts: SuiteOptions) -> _Tally:
    t = _Tally()
    spec = TruncSpec(opts.r_maxlen, 4)
    graphs = g3()
    codes = [build_r(x, spec).structure for x in graphs]
    own = [build_r(x, r_spec(x, opts.r_maxlen)).structure for x in graphs]
    for (i, x), (j, y) in itertools.product(enumerate(graphs), repeat=2):
        sigma = search(x, y, MorphKind.ISOMORPHISM)
        tau = search(codes[i], codes[j], MorphKind.ISOMORPHISM)
        t.check(
            (sigma is None) == (tau is None),
            lambda: f"{_name(i)} vs {_name(j)}: graph iso {sigma is not None}, R-code iso {tau is not None}",
        )
        for images in itertools.permutations(sorted(y.domain), len(x)):
            f = MorphismWitness(dict(zip(sorted(x.domain), images)), MorphKind.EMBEDDING)
            if not verify(x, y, f):
                continue
            h = weak_epi_r(x, y, f, r_spec(x, opts.r_maxlen))
            t.check(verify(own[j], own[i], h), lambda: f"weak epi for {dict(f.map)}: {_name(i)} -> {_name(j)} fails")
    return t


def wspace(opts: SuiteOptions) -> _Tally:
    t = _Tally()
    kit, reps = t_code_kit(TruncSpec(opts.kit_maxlen, 3))
    for k in (1, 2):
        for variant in (None, reps):
            tag = f"k={k} {'n-classes' if variant else 'full'}"
            space = assemble_w(kit, k, variant)
            n = len(space.entries)
            seen = {}
            for idx, img in enumerate(space.images):
                other = seen.setdefault(img, idx)
                t.check(other == idx, lambda: f"{tag}: entries {other} and {idx} share an image")
            for a, b in itertools.product(range(n), repeat=2):
                ia, ib = space.images[a], space.images[b]
                emb = search(ia, ib, MorphKind.EMBEDDING)
                iso = search(ia, ib, MorphKind.ISOMORPHISM)
                t.check((emb is not None) == space.S[a][b], lambda: f"{tag}: S({a},{b})={space.S[a][b]} but embedding {emb is not None}")
                t.check((iso is not None) == space.F[a][b], lambda: f"{tag}: F({a},{b})={space.F[a][b]} but iso {iso is not None}")
                for w in (emb, iso):
                    if w is None:
                        continue
                    irr_a, refl_a = split_parts(ia)
                    irr_b, refl_b = split_parts(ib)
                    ok = all(w.map[v] in irr_b.domain for v in irr_a.domain) and all(
                        w.map[v] in refl_b.domain for v in refl_a.domain
                    )
                    t.check(ok, lambda: f"{tag}: {w.kind.value} {a}->{b} mixes the parts")
    return t


def parity(opts: SuiteOptions) -> _Tally:
    t = _Tally()
    for k in range(1, 5):
        gs = enumerate_g(k)
        t.check(len(gs) == math.comb(2 * k, k), lambda: f"|G_{k}| = {len(gs)}")
        t.check(
            len({g.odd_images() for g in gs}) == len(gs),
            lambda: f"odd images do not determine g for k={k}",
        )
    for k in range(1, 4):
        for h in itertools.permutations(range(2 * k)):
            g, p, q = decompose_parity(h)
            ok = all(h[2 * n] == g(2 * p[n]) and h[2 * n + 1] == g(2 * q[n] + 1) for n in range(k))
            t.check(ok, lambda: f"decomposition of {h} fails")
    return t


def _random_instance(rng: random.Random):
    nblocks = rng.randint(1, 20)

    def partition(tag: int) -> FinPartition:
        sizes = [rng.randint(1, 4) for _ in range(nblocks)]
        labels = iter(rng.sample(range(1000), sum(sizes)))
        return FinPartition.from_labels(
            {next(labels): b for b, size in enumerate(sizes) for _ in range(size)}
        )

    e, g = partition(0), partition(1)

    def reduction(src: FinPartition, dst: FinPartition) -> dict:
        perm = rng.sample(range(len(dst)), len(dst))
        return {
            v: rng.choice(sorted(dst.blocks[perm[i]]))
            for i, b in enumerate(src.blocks)
            for v in b
        }

    return e, g, reduction(e, g), reduction(g, e)


def sb(opts: SuiteOptions) -> _Tally:
    t = _Tally()
    rng = random.Random(opts.seed)
    for n in range(opts.sb_instances):
        e, g, phi, psi = _random_instance(rng)
        res = sb_bijection(e, g, phi, psi)
        t.check(check_classwise_iso(res.phi, res.psi, e, g), lambda: f"instance {n} (seed {opts.seed})")
    return t


def coding(opts: SuiteOptions) -> _Tally:
    t = _Tally()
    for n, m in itertools.product(range(51), repeat=2):
        k = CANTOR.pair(n, m)
        t.check(CANTOR.unpair(k) == (n, m) and n <= k and m <= k, lambda: f"pairing at ({n}, {m})")
    for length in range(1, 51):
        a, b = CANTOR.unpair(length - 1)
        t.check(a < length and b < length, lambda: f"relevant pair out of range at length {length}")
    for prefix_len in range(21):
        bound = extension_bound(prefix_len)
        for p, q in itertools.product(range(4), repeat=2):
            # enumerate even lengths rather than trusting extension_length
            found = None
            for half in range(1, bound // 2 + 1):
                n, m = CANTOR.unpair(half - 1)
                if 2 * n > prefix_len and 2 * m > prefix_len and (p == q or n != m):
                    found = half
                    break
            ok = found is not None
            if ok:
                half, n, m = extension_length(prefix_len, p != q)
                v = [0] * (2 * half)
                v[2 * n], v[2 * m] = p, q
                ok = half == found and relevant_pair(even_subsequence(v)) == (p, q)
            t.check(ok, lambda: f"no extension for prefix {prefix_len}, target ({p}, {q})")
    return t


def swap(opts: SuiteOptions) -> _Tally:
    t = _Tally()
    for label, run in (("tcode", tcode), ("universal", universal)):
        base, alt = run(opts, CANTOR), run(opts, SWAPPED)
        t.check(
            base.outcomes == alt.outcomes,
            lambda: f"{label}: {base.bad} failures under {CANTOR.name}, {alt.bad} under {SWAPPED.name}",
        )
    return t


CRITERIA: list[tuple[int, str, Callable[[SuiteOptions], _Tally]]] = [
    (1, "oracle", oracle),
    (2, "tcode", tcode),
    (3, "universal", universal),
    (4, "rcode", rcode),
    (5, "wspace", wspace),
    (6, "parity", parity),
    (7, "sb", sb),
    (8, "coding", coding),
    (9, "swap", swap),
]


def criterion_names() -> list[str]:
    return [name for _, name, _ in CRITERIA]


def run_criterion(name: str, opts: SuiteOptions | None = None) -> CriterionResult:
    opts = opts or SuiteOptions()
    for number, cname, fn in CRITERIA:
        if cname == name:
            start = time.perf_counter()
            tally = fn(opts)
            elapsed = time.perf_counter() - start
            detail = f"{tally.bad} failed" if tally.bad else ""
            return CriterionResult(
                number, name, tally.bad == 0 and tally.instances > 0,
                tally.instances, elapsed, detail, tally.failures,
            )
    raise ContractError(f"unknown criterion {name!r}; choose from {', '.join(criterion_names())}")


def run_suite(
    names: list[str] | None = None,
    opts: SuiteOptions | None = None,
    on_result: Callable[[CriterionResult], None] | None = None,
) -> list[CriterionResult]:
    results = []
    for name in names or criterion_names():
        res = run_criterion(name, opts)
        if on_result:
            on_result(res)
        results.append(res)
    return results
