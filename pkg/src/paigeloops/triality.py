"""Collineation groups of a Moufang 3-net and the triality axioms.

Gamma0 is generated by all Bol reflections; the class action maps each
collineation to its permutation of the three line classes; Gamma is the
kernel (the direction-preserving part).  S is generated by the reflections
in the three lines through a chosen origin, sigma = the class-1 one, and
rho = sigma_1 * sigma_2 (left-to-right composition).

Conventions (order-sensitive): (p * q)(x) = q(p(x)), x^rho = rho^-1 x rho,
and [g, s] = g^-1 s^-1 g s.
"""

from dataclasses import dataclass

import numpy as np

from ._backend import kernels as _default_kernels
from .errors import (CorrespondenceError, DomainError, InternalError,
                     NotMoufangNetError)
from .nets import LineRef, bol_reflection, is_collineation, line_image
from .perm import PermGroup, Permutation

# the six class actions as one-line maps {1,2,3} -> {1,2,3}
_ID3 = (1, 2, 3)


def _compose_action(a, b):
    """Class action of (gamma then delta) from their actions a, b."""
    return tuple(b[a[i - 1] - 1] for i in (1, 2, 3))


def _invert_action(a):
    out = [0, 0, 0]
    for i in (1, 2, 3):
        out[a[i - 1] - 1] = i
    return tuple(out)


@dataclass(frozen=True)
class TrialitySetup:
    net: object
    origin: int
    gamma0: PermGroup
    gamma: PermGroup
    # class action of each gamma0 input generator, aligned by index
    gen_actions: tuple
    S_gens: tuple          # reflections at the origin's three lines
    sigma: Permutation
    rho: Permutation

    def orders(self):
        """(|Gamma0|, |Gamma|, index)."""
        o0 = self.gamma0.order
        og = self.gamma.order
        if og == 0 or o0 % og:
            raise InternalError("kernel order does not divide group order")
        return o0, og, o0 // og


def build_triality(net, origin=0, override_limits=False, kernels=None):
    """Construct Gamma0, Gamma, and the origin reflections for a Moufang
    net; raises NotMoufangNetError when any Bol reflection fails to be a
    collineation."""
    if kernels is None:
        kernels = _default_kernels
    n = net.n
    if n < 2:
        raise DomainError("net too small for a triality setup")
    if not 0 <= origin < n * n:
        raise DomainError("origin out of range")
    i0, j0 = divmod(int(origin), n)

    reflections = []
    actions = []
    seen = {}
    origin_lines = (LineRef(1, i0), LineRef(2, j0),
                    LineRef(3, int(net.loop.table[i0, j0])))
    origin_refs = {}
    for line in net.lines():
        r = bol_reflection(net, line)
        v = is_collineation(net, r)
        if not v.ok:
            raise NotMoufangNetError(
                f"Bol reflection at class {line.cls} value {line.value} "
                "is not a collineation")
        act = v.direction_action
        if sorted(act) != [1, 2, 3] or act == _ID3:
            raise InternalError("reflection class action is not a "
                                "transposition")
        if line in origin_lines:
            origin_refs[line.cls] = r
        key = r.images.tobytes()
        if key not in seen:
            seen[key] = len(reflections)
            reflections.append(r)
            actions.append(act)

    gamma0 = PermGroup(reflections, degree=n * n,
                       override_limits=override_limits, kernels=kernels,
                       base_hint=[origin])

    s1 = origin_refs[1]
    s2 = origin_refs[2]
    s3 = origin_refs[3]
    a1 = (1, 3, 2)
    a2 = (3, 2, 1)
    # transversal of the class-action kernel: 1, s1, s2, s1s2, s2s1, s1s2s1
    trans = {
        _ID3: Permutation.identity(n * n),
        a1: s1,
        a2: s2,
        _compose_action(a1, a2): s1 * s2,
        _compose_action(a2, a1): s2 * s1,
        _compose_action(_compose_action(a1, a2), a1): s1 * s2 * s1,
    }
    if len(trans) != 6:
        raise InternalError("transversal does not cover S3")

    kern_gens = []
    kseen = set()
    for t_act, t in trans.items():
        for g, g_act in zip(reflections, actions):
            prod_act = _compose_action(t_act, g_act)
            rep = trans[prod_act]
            k = t * g * rep.inverse()
            key = k.images.tobytes()
            if not k.is_identity() and key not in kseen:
                kseen.add(key)
                kern_gens.append(k)
    gamma = PermGroup(kern_gens, degree=n * n,
                      override_limits=override_limits, kernels=kernels,
                      base_hint=[origin])

    return TrialitySetup(net=net, origin=int(origin), gamma0=gamma0,
                         gamma=gamma, gen_actions=tuple(actions),
                         S_gens=(s1, s2, s3), sigma=s1, rho=s1 * s2)


def _conj(x, r, rinv):
    """x^r = r^-1 x r."""
    return rinv * x * r


def _commutator(g, s):
    """[g, s] = g^-1 s^-1 g s."""
    return g.inverse() * s.inverse() * g * s


def verify_triality_axioms(T, samples=1000, seed=0):
    """Check the triality axioms on the setup; returns a list of report
    entries {"axiom": ..., "checked": ..., "failures": ...}.

    Axioms: the origin reflections generate a group of order 6 with
    sigma^2 = rho^3 = 1; [g, sigma] [g, sigma]^rho [g, sigma]^(rho^2) = 1
    for the generators of Gamma and uniformly sampled elements; and the
    commutators [Gamma, {sigma, rho}] generate all of Gamma.
    """
    report = []
    sigma = T.sigma
    rho = T.rho
    d = sigma.degree

    # (a) <sigma, rho> is S3
    failures = 0
    if not (sigma * sigma).is_identity():
        failures += 1
    if not (rho * rho * rho).is_identity():
        failures += 1
    if sigma * rho == rho * sigma:
        failures += 1
    els = {Permutation.identity(d)}
    frontier = [Permutation.identity(d)]
    while frontier and len(els) <= 8:
        nxt = []
        for p in frontier:
            for g in (sigma, rho):
                q = p * g
                if q not in els:
                    els.add(q)
                    nxt.append(q)
        frontier = nxt
    if len(els) != 6:
        failures += 1
    report.append({"axiom": "s_subgroup", "checked": 4,
                   "failures": failures})

    # (b) triality equation on generators + uniform samples
    rinv = rho.inverse()
    rho2 = rho * rho
    r2inv = rho2.inverse()

    def equation_holds(g):
        c = _commutator(g, sigma)
        cr = rinv * c * rho
        crr = r2inv * c * rho2
        return (c * cr * crr).is_identity()

    failures = 0
    checked = 0
    for g in T.gamma.generators:
        checked += 1
        if not equation_holds(g):
            failures += 1
    for g in T.gamma.random_elements(samples, seed=seed):
        checked += 1
        if not equation_holds(g):
            failures += 1
    report.append({"axiom": "triality_equation", "checked": checked,
                   "failures": failures})

    # (c) [Gamma, S] = Gamma by order equality
    comm_gens = []
    for g in T.gamma.generators:
        for s in (sigma, rho):
            comm_gens.append(_commutator(g, s))
    H = PermGroup(comm_gens, degree=d, override_limits=True,
                  kernels=T.gamma._kern, base_hint=[T.origin])
    ok = H.order == T.gamma.order
    report.append({"axiom": "gamma_commutator_span",
                   "checked": len(comm_gens), "failures": 0 if ok else 1})
    return report


@dataclass(frozen=True)
class StabilizerCorrespondence:
    group: PermGroup              # the automorphisms alpha, acting on L
    alphas: np.ndarray            # (m, n) image arrays, sorted lexicographically

    @property
    def count(self):
        return len(self.alphas)


def origin_stabilizer_automorphisms(T):
    """Enumerate Stab_Gamma(origin), read each element's action on the
    origin's class-1 line as a candidate map alpha, and verify the element
    is exactly (x, y) -> (alpha(x), alpha(y)) with alpha a loop
    automorphism.  Returns the group of the alphas with the verified
    image arrays."""
    net = T.net
    n = net.n
    if T.origin != 0:
        raise DomainError(
            "the correspondence reads maps in the loop's own coordinates, "
            "which requires the setup based at the identity point (0, 0); "
            "coordinatize at the other origin with coordinate_loop first")
    if not T.gamma.is_transitive():
        raise DomainError("Gamma is not transitive on the net's points")
    i0, j0 = divmod(T.origin, n)
    stab = T.gamma.point_stabilizer(T.origin)
    tbl = net.loop.table.astype(np.int64)
    line_pts = i0 * n + np.arange(n, dtype=np.int64)
    alphas = []
    for s in stab.elements():
        img = s.images.astype(np.int64)
        on_line = img[line_pts]
        if (on_line // n != i0).any():
            raise CorrespondenceError(
                "a stabilizer element moves the origin's class-1 line")
        alpha = on_line % n
        expected = (alpha * n)[:, None] + alpha[None, :]
        if not (img.reshape(n, n) == expected).all():
            raise CorrespondenceError(
                "a stabilizer element does not act coordinatewise")
        if not (alpha[tbl] == tbl[np.ix_(alpha, alpha)]).all():
            raise CorrespondenceError(
                "an induced map is not multiplicative")
        alphas.append(alpha.astype(np.int32))
    arr = np.array(alphas, dtype=np.int32)
    order = np.lexsort(arr.T[::-1])
    arr = arr[order]
    gens = [Permutation(a, _checked=True) for a in arr
            if (a != np.arange(n, dtype=np.int32)).any()]
    group = PermGroup(gens if gens else [],
                      degree=n, kernels=T.gamma._kern)
    if group.order != len(arr):
        raise InternalError("alpha group order mismatch")
    return StabilizerCorrespondence(group=group.reduced(), alphas=arr)


def induced_automorphism_check(T, alpha):
    """For a loop automorphism alpha, build (x, y) -> (alpha(x), alpha(y))
    and report whether it is a direction-preserving collineation fixing
    the origin's three lines and centralizing their Bol reflections."""
    net = T.net
    n = net.n
    alpha = np.asarray(alpha, dtype=np.int64)
    if alpha.shape != (n,):
        raise DomainError("alpha must be a length-n image array")
    seen = np.zeros(n, dtype=bool)
    seen[alpha] = True
    if not seen.all():
        raise DomainError("alpha is not a bijection")
    tbl = net.loop.table.astype(np.int64)
    if not (alpha[tbl] == tbl[np.ix_(alpha, alpha)]).all():
        raise DomainError("alpha is not multiplicative")

    sharp = Permutation(
        ((alpha * n)[:, None] + alpha[None, :]).ravel().astype(np.int32),
        _checked=True)
    v = is_collineation(net, sharp)
    i0, j0 = divmod(T.origin, n)
    origin_lines = (LineRef(1, i0), LineRef(2, j0),
                    LineRef(3, int(net.loop.table[i0, j0])))
    fixes_lines = bool(v.ok) and all(
        line_image(v, l) == l for l in origin_lines)
    sharp_inv = sharp.inverse()
    centralizes = all(sharp * s * sharp_inv == s for s in T.S_gens)
    report = {
        "collineation": bool(v.ok),
        "direction_preserving": bool(v.ok) and v.direction_action == _ID3,
        "fixes_origin_lines": fixes_lines,
        "centralizes_origin_reflections": bool(centralizes),
    }
    report["passed"] = all(report.values())
    return report


def central_elements(G, chunk=2048):
    """Nontrivial central elements of a transitive permutation group,
    by semiregular propagation: a central element is determined by the
    image of the first base point; propagate each candidate image along
    the level-0 Schreier tree and keep those commuting with every
    generator."""
    if not G.is_transitive():
        raise DomainError("central_elements needs a transitive group")
    ch = G._build()
    if ch.nlevels() == 0:
        return []
    d = G.degree
    base = ch.bases[0]
    sv = ch.svs[0]
    gs = ch.genstacks[0]
    orbit = ch.orbits[0][:ch.norbits[0]]
    if ch.norbits[0] != d:
        raise InternalError("chain orbit disagrees with transitivity")
    gens = [g.images for g in G.generators]
    out = []
    for lo in range(0, d, chunk):
        cand = np.arange(lo, min(lo + chunk, d), dtype=np.int32)
        m = len(cand)
        # Z[c, v] = image of point v under the candidate centralizer
        # sending base -> cand[c]
        Z = np.full((m, d), -1, dtype=np.int32)
        Z[:, base] = cand
        for v in orbit[1:]:
            er = int(sv[v])
            parent = int(gs[er ^ 1][v])
            Z[:, v] = gs[er][Z[:, parent]]
        alive = np.ones(m, dtype=bool)
        for g in gens:
            if not alive.any():
                break
            rows = np.nonzero(alive)[0]
            bad = (Z[rows][:, g] != g[Z[rows]]).any(axis=1)
            alive[rows[bad]] = False
        for r in np.nonzero(alive)[0]:
            z = Z[r].astype(np.int32)
            if (z != np.arange(d, dtype=np.int32)).any():
                out.append(Permutation(z, _checked=True))
    return out
