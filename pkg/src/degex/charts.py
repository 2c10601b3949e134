"""Exact rational sampling of the expanded-family charts.

A depth-n chart point carries the base coordinates (x, y, z), the n+1 base
parameters t_1..t_{n+1} and two towers of projective pairs.  On the dense
locus the defining relations are

    x0^(1) t_1       = x x1^(1)
    y0^(1) t_{n+1}   = y y1^(1)
    y1^(k-1) y0^(k) t_{n+2-k} = y0^(k-1) y1^(k)      (2 <= k <= n)
    y0^(n) x z       = y1^(n) t_1
    x0^(k) y0^(n+1-k) z = x1^(k) y1^(n+1-k)          (1 <= k <= n)

together with the product identity x y z = t_1 ... t_{n+1}.  Sampling draws
the free coordinates at random, solves for the dependent ones exactly and
randomizes the projective representatives, so verification exercises the
equations rather than the construction.  Projective pairs are never
normalized; comparisons go through cross products.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import prod

RETRY_BOUND = 64

Pair = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class ChartPoint:
    x: Fraction
    y: Fraction
    z: Fraction
    t: tuple[Fraction, ...]
    xs: tuple[Pair, ...]
    ys: tuple[Pair, ...]

    @property
    def depth(self) -> int:
        return len(self.t) - 1


@dataclass(frozen=True)
class TorusElement:
    taus: tuple[Fraction, ...]

    def __post_init__(self):
        if any(tau == 0 for tau in self.taus):
            raise ValueError("torus entries must be nonzero")

    def compose(self, other: "TorusElement") -> "TorusElement":
        if len(self.taus) != len(other.taus):
            raise ValueError("size mismatch")
        return TorusElement(tuple(a * b for a, b in zip(self.taus, other.taus)))

    @classmethod
    def identity(cls, n: int) -> "TorusElement":
        return cls(tuple(Fraction(1) for _ in range(n)))


def _nonzero_rational(rng: random.Random) -> Fraction:
    for _ in range(RETRY_BOUND):
        num = rng.randint(-9, 9)
        if num != 0:
            return Fraction(num, rng.randint(1, 9))
    raise RuntimeError("exceeded retry bound while drawing a nonzero rational")


def sample_chart_point(n: int, seed: int, rng: random.Random | None = None) -> ChartPoint:
    """Random chart point of depth n; deterministic per (n, seed)."""
    if n < 0:
        raise ValueError("depth must be nonnegative")
    rng = rng or random.Random(f"chart:{n}:{seed}")
    x = _nonzero_rational(rng)
    z = _nonzero_rational(rng)
    t = tuple(_nonzero_rational(rng) for _ in range(n + 1))
    y = prod(t, start=Fraction(1)) / (x * z)
    xs = []
    ys = []
    for k in range(1, n + 1):
        alpha = _nonzero_rational(rng)
        xs.append((alpha * x, alpha * prod(t[:k], start=Fraction(1))))
        beta = _nonzero_rational(rng)
        ys.append((beta * y, beta * prod(t[n + 1 - k :], start=Fraction(1))))
    return ChartPoint(x, y, z, t, tuple(xs), tuple(ys))


def chart_equation_residuals(p: ChartPoint) -> dict[str, Fraction]:
    """Exact residual of every defining relation at p (all must vanish)."""
    n = p.depth
    res: dict[str, Fraction] = {}
    if n == 0:
        return res
    res["x(1)"] = p.xs[0][0] * p.t[0] - p.x * p.xs[0][1]
    res["y(1)"] = p.ys[0][0] * p.t[n] - p.y * p.ys[0][1]
    for k in range(2, n + 1):
        res[f"y-chain({k})"] = (
            p.ys[k - 2][1] * p.ys[k - 1][0] * p.t[n + 1 - k]
            - p.ys[k - 2][0] * p.ys[k - 1][1]
        )
    res["y(n)-closure"] = p.ys[n - 1][0] * p.x * p.z - p.ys[n - 1][1] * p.t[0]
    for k in range(1, n + 1):
        res[f"cross({k})"] = (
            p.xs[k - 1][0] * p.ys[n - k][0] * p.z - p.xs[k - 1][1] * p.ys[n - k][1]
        )
    return res


def failed_equations(p: ChartPoint) -> list[str]:
    return sorted(name for name, r in chart_equation_residuals(p).items() if r != 0)


def verify_product_identity(p: ChartPoint) -> bool:
    return p.x * p.y * p.z == prod(p.t, start=Fraction(1))


def act(g: TorusElement, p: ChartPoint) -> ChartPoint:
    """Apply the torus action; the result satisfies the same relations.

    The k-th factor scales t_k up and t_{k+1} down, hence scales the product
    of the first k base parameters by tau_k; the projective towers transform
    by the action this induces through the defining relations.
    """
    n = p.depth
    if len(g.taus) != n:
        raise ValueError(f"torus element of rank {len(g.taus)} on a depth-{n} point")
    if n == 0:
        return p
    tau = g.taus
    t = list(p.t)
    new_t = []
    for i in range(n + 1):
        s = tau[i] if i < n else Fraction(1)
        s_prev = tau[i - 1] if i >= 1 else Fraction(1)
        new_t.append(s / s_prev * t[i])
    xs = tuple((x0, tau[k] * x1) for k, (x0, x1) in enumerate(p.xs))
    ys = tuple(
        (tau[n + 1 - j - 1] * y0, y1) for j, (y0, y1) in enumerate(p.ys, start=1)
    )
    return ChartPoint(p.x, p.y, p.z, tuple(new_t), xs, ys)


def pairs_proportional(a: Pair, b: Pair) -> bool:
    """Projective equality via the cross product; pairs are not normalized."""
    if a == (0, 0) or b == (0, 0):
        return False
    return a[0] * b[1] - a[1] * b[0] == 0


def delta_coincidence_check(
    n: int, k: int, samples: int = 100, seed: int = 0, z_nonzero: bool = True
) -> bool:
    """On the x = y = 0, z != 0 locus the k-th x-pair and the (n+1-k)-th
    y-pair determine each other through the cross relation
    x0 y0 z = x1 y1; the check verifies this determinacy in both directions
    on random pairs.  With z = 0 the relation degenerates and determinacy
    fails.
    """
    if not 1 <= k <= n:
        raise ValueError("level out of range")
    rng = random.Random(f"coincidence:{n}:{k}:{seed}")
    for _ in range(samples):
        z = _nonzero_rational(rng) if z_nonzero else Fraction(0)
        # a random projective pair, occasionally on a coordinate axis
        shape = rng.randint(0, 9)
        if shape == 0:
            y_pair = (_nonzero_rational(rng), Fraction(0))
        elif shape == 1:
            y_pair = (Fraction(0), _nonzero_rational(rng))
        else:
            y_pair = (_nonzero_rational(rng), _nonzero_rational(rng))
        # forward: the relation forces (x0 : x1) = (y1 : y0 z)
        x_pair = (y_pair[1], y_pair[0] * z)
        if x_pair == (0, 0):
            return False
        if x_pair[0] * y_pair[0] * z != x_pair[1] * y_pair[1]:
            return False
        # backward: the derived pair must pin the y-pair back down
        y_back = (x_pair[1], x_pair[0] * z)
        if y_back == (0, 0) or not pairs_proportional(y_back, y_pair):
            return False
        # determinacy: leaving the line breaks the relation
        for off in ((x_pair[0] + 1, x_pair[1]), (x_pair[0], x_pair[1] + 1)):
            if off != (0, 0) and not pairs_proportional(off, x_pair):
                if off[0] * y_pair[0] * z == off[1] * y_pair[1]:
                    return False
                break
    return True


def verify_samples(n: int, samples: int, seed: int) -> dict:
    """Sample chart points and verify every relation exactly; CLI backend."""
    rng = random.Random(f"verify:{n}:{seed}")
    failures = []
    for i in range(samples):
        p = sample_chart_point(n, seed, rng=rng)
        bad = failed_equations(p)
        if bad:
            failures.append({"sample": i, "failed_equations": bad})
        if not verify_product_identity(p):
            failures.append({"sample": i, "failed_equations": ["product-identity"]})
    return {
        "n": n,
        "samples": samples,
        "seed": seed,
        "pass": not failures,
        "failures": failures,
    }


def verify_torus_pairs(n: int, pairs: int, seed: int) -> dict:
    """Random (g, p) pairs: the action must preserve every relation and the
    base-parameter product, and compose like the group law."""
    rng = random.Random(f"torus:{n}:{seed}")
    failures = []
    for i in range(pairs):
        p = sample_chart_point(n, seed, rng=rng)
        g = TorusElement(tuple(_nonzero_rational(rng) for _ in range(n)))
        h = TorusElement(tuple(_nonzero_rational(rng) for _ in range(n)))
        q = act(g, p)
        if failed_equations(q) or not verify_product_identity(q):
            failures.append({"pair": i, "reason": "relations broken by action"})
        if prod(q.t, start=Fraction(1)) != prod(p.t, start=Fraction(1)):
            failures.append({"pair": i, "reason": "base product not invariant"})
        if act(g, act(h, p)) != act(g.compose(h), p):
            failures.append({"pair": i, "reason": "group law violated"})
    return {"n": n, "pairs": pairs, "pass": not failures, "failures": failures}
