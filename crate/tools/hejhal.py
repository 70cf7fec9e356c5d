#!/usr/bin/env python3
"""Level-one Maass cusp form data generator.

Produces the two spectral dataset files read by the `spectral` module:

  forms file:  j,kappa,epsilon,alpha,H_half,H_<tau>...
  hecke file:  j,n,t        (prime powers n <= N_max)

Pipeline per form:
  1. Hejhal's linear-system method on PSL(2,Z) locates kappa_j and the
     first Fourier coefficients (two heights Y1 != Y2 must agree).
  2. Low-height Fourier inversion extends the Hecke eigenvalues t_j(n)
     to n <= N_max.
  3. The Petersson norm is integrated over the fundamental domain, giving
     alpha_j = |rho_j(1)|^2 / cosh(pi kappa_j).
  4. H_j(s) is evaluated with a smoothed approximate functional equation
     (Gaussian test function exp(B w^2)); two values of B must agree.

K_{iR}(x) is evaluated with Arb (python-flint).  Everything else is numpy.
"""

import argparse
import math
import sys
import time

import numpy as np
from flint import acb, arb, ctx
from scipy.optimize import brentq
from scipy.special import loggamma

ctx.prec = 160


def kbessel_scaled(R, xs):
    """exp(pi R / 2) * K_{iR}(x), elementwise."""
    nu = acb(0, R)
    scale = (arb.pi() * R / 2).exp()
    flat = np.asarray(xs, dtype=float).ravel()
    out = np.empty(flat.shape)
    for i, x in enumerate(flat):
        v = acb(float(x)).bessel_k(nu) * scale
        out[i] = float(v.real.mid())
    return out.reshape(np.shape(xs))


def pullback(x, y):
    while True:
        x -= math.floor(x + 0.5)
        r2 = x * x + y * y
        if r2 >= 1.0 - 1e-14:
            return x, y
        x, y = -x / r2, y / r2


def truncation_order(R, Y, eps=1e-17):
    m = max(2, int((R - 5.0) / (2 * math.pi * Y)))
    while abs(kbessel_scaled(R, [2 * math.pi * m * Y])[0]) > eps:
        m += 1
    return m


def parity_fn(parity):
    return np.cos if parity == 1 else np.sin


class HeightSystem:
    """Pullback data and Bessel values at one height Y, shared by parities."""

    def __init__(self, R, M, Q, Y):
        self.R, self.M, self.Q, self.Y = R, M, Q, Y
        self.xm = (np.arange(1, Q + 1) - 0.5) / (2 * Q)
        pts = [pullback(x, Y) for x in self.xm]
        self.xs = np.array([p[0] for p in pts])
        self.ys = np.array([p[1] for p in pts])
        self.ks = np.arange(1, M + 1)
        self.kmat = kbessel_scaled(R, 2 * np.pi * np.outer(self.ys, self.ks))
        self.ky = kbessel_scaled(R, 2 * np.pi * self.ks * Y)

    def solve(self, parity):
        cs = parity_fn(parity)
        basis = np.sqrt(self.ys)[:, None] * self.kmat * cs(2 * np.pi * np.outer(self.xs, self.ks))
        proj = cs(2 * np.pi * np.outer(self.ks, self.xm))
        V = (2.0 / self.Q) * proj @ basis
        V -= np.diag(np.sqrt(self.Y) * self.ky)
        c = np.linalg.solve(V[1:, 1:], -V[1:, 0])
        return np.concatenate([[1.0], c])


Y1, Y2 = 0.84, 0.79
HEIGHT_PAIRS = ((0.84, 0.79), (0.79, 0.73))


def scan_values(R):
    M = truncation_order(R, 0.73)
    Q = M + 6
    systems = {Y: HeightSystem(R, M, Q, Y) for Y in (0.84, 0.79, 0.73)}
    out = {}
    for parity in (1, -1):
        sol = {Y: s.solve(parity) for Y, s in systems.items()}
        out[parity] = [sol[a][1] - sol[b][1] for a, b in HEIGHT_PAIRS]
    return out


def defect(R, parity, ya=Y1, yb=Y2):
    M = truncation_order(R, min(ya, yb))
    Q = M + 6
    a = HeightSystem(R, M, Q, ya).solve(parity)
    b = HeightSystem(R, M, Q, yb).solve(parity)
    return a, b


def find_eigenvalues(r_lo, r_hi, step, log):
    grid = np.arange(r_lo, r_hi + step / 2, step)
    prev = None
    found = []
    for R in grid:
        cur = scan_values(R)
        if prev is not None:
            for p in (1, -1):
                for k, pair in enumerate(HEIGHT_PAIRS):
                    if np.sign(cur[p][k]) != np.sign(prev[1][p][k]):
                        for cand in refine(prev[0], R, p, pair, log):
                            if all(abs(cand[0] - f[0]) > 1e-7 or cand[1] != f[1] for f in found):
                                found.append(cand)
        prev = (R, cur)
    return found


def refine(a, b, parity, pair, log):
    f = lambda R: (lambda ab: ab[0][1] - ab[1][1])(defect(R, parity, *pair))
    try:
        R = brentq(f, a, b, xtol=1e-13, rtol=1e-15, maxiter=80)
    except ValueError:
        return []
    ca, cb = defect(R, parity, *pair)
    d = np.max(np.abs(ca[1:5] - cb[1:5]))
    hecke = abs(ca[1] * ca[2] - ca[5]) + abs(ca[1] ** 2 - 1 - ca[3])
    ok = d < 1e-7 and hecke < 1e-7
    if ok:
        log(f"  eigenvalue R={R:.12f} parity={parity:+d} ydefect={d:.2e} hecke={hecke:.2e}")
    return [(R, parity)] if ok else []


def coefficients(R, parity, n_max):
    """t(n) for n <= n_max: stage-one solve plus low-height inversion."""
    M = truncation_order(R, Y2, eps=1e-19) + 4
    h = HeightSystem(R, M, M + 8, Y1)
    c_low = h.solve(parity)
    cs = parity_fn(parity)

    def psi(x, y):
        ks = np.arange(1, M + 1)
        kv = kbessel_scaled(R, 2 * np.pi * ks * y)
        return math.sqrt(y) * np.sum(c_low * kv * cs(2 * np.pi * ks * x))

    ns = np.arange(1, n_max + 1)
    best = np.zeros(n_max)
    weight = np.zeros(n_max)
    estimates = []
    for frac in (0.55, 0.75, 0.95):
        Y = frac * R / (2 * np.pi * n_max)
        Y = min(Y, 0.5)
        nfreq = int((R + 45.0) / (2 * np.pi * Y)) + 1
        Q = max(nfreq + 16, n_max + 16)
        xm = (np.arange(1, Q + 1) - 0.5) / (2 * Q)
        vals = np.array([psi(*pullback(x, Y)) for x in xm])
        proj = (2.0 / Q) * cs(2 * np.pi * np.outer(ns, xm)) @ vals
        ky = math.sqrt(Y) * kbessel_scaled(R, 2 * np.pi * ns * Y)
        est = proj / ky
        estimates.append(est)
        w = np.abs(ky)
        better = w > weight
        best[better] = est[better]
        weight[better] = w[better]
    spread = np.max(np.abs(np.array(estimates) - best), axis=0)
    return c_low, M, best, weight, spread


def petersson_scaled_norm(R, parity, coeffs):
    """Integral over the fundamental domain of |psi|^2 dx dy / y^2, with
    psi = sum_{n>=1} t(n) sqrt(y) Ktilde(2 pi n y) cs(2 pi n x)."""
    M = len(coeffs)
    ks = np.arange(1, M + 1)
    cs = parity_fn(parity)
    # y >= 1: Parseval in x.
    upper = 0.0
    gx, gw = np.polynomial.legendre.leggauss(160)
    for n in ks:
        y_hi = max(2.0, (R + 60.0) / (2 * np.pi * n))
        u = 0.5 * (gx + 1) * math.log(y_hi)
        w = 0.5 * gw * math.log(y_hi)
        y = np.exp(u)
        kv = kbessel_scaled(R, 2 * np.pi * n * y)
        # dy / y = du
        upper += coeffs[n - 1] ** 2 * 0.5 * np.sum(w * kv ** 2)
    # sqrt(1-x^2) <= y <= 1, |x| <= 1/2.
    nx = ny = 40
    ax, aw = np.polynomial.legendre.leggauss(nx)
    by, bw = np.polynomial.legendre.leggauss(ny)
    lower = 0.0
    for xi, wi in zip(0.25 * (ax + 1), 0.25 * aw):
        y0 = math.sqrt(1 - xi * xi)
        ys = y0 + 0.5 * (by + 1) * (1 - y0)
        wy = 0.5 * bw * (1 - y0)
        kv = kbessel_scaled(R, 2 * np.pi * np.outer(ys, ks))
        psi = np.sqrt(ys) * ((kv * cs(2 * np.pi * ks * xi)) @ coeffs)
        lower += 2 * wi * np.sum(wy * psi ** 2 / ys ** 2)
    return upper + lower


def gamma_log(s, R, parity):
    shift = 0.0 if parity == 1 else 1.0
    return (-s * math.log(math.pi)
            + loggamma((s + shift + 1j * R) / 2)
            + loggamma((s + shift - 1j * R) / 2))


def hecke_value(R, parity, t, s, B):
    """H(s) by the smoothed approximate functional equation."""
    n = np.arange(1, len(t) + 1)
    logn = np.log(n)
    c = 1.5
    vmax = R + 60.0
    h = 0.01
    v = np.arange(-vmax, vmax + h / 2, h)
    w = c + 1j * v

    def vfun(s0):
        g = np.exp(gamma_log(s0 + w, R, parity) - gamma_log(s0, R, parity) + B * w * w) / w
        # (1/2 pi i) int ... dw, dw = i dv
        return (h / (2 * np.pi)) * (np.exp(-np.outer(logn, w)) @ g)

    root = 1.0 if parity == 1 else -1.0
    first = np.sum(t * n ** (-s) * vfun(s))
    ratio = np.exp(gamma_log(1 - s, R, parity) - gamma_log(s, R, parity))
    second = root * ratio * np.sum(t * n ** (-(1 - s)) * vfun(1 - s))
    return first + second


def primes_upto(n):
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(n ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return [int(p) for p in np.nonzero(sieve)[0]]


def multiplicative_extension(tp, n_max):
    """Hecke-multiplicative extension of prime-power data to all n."""
    t = np.zeros(n_max + 1)
    for n in range(1, n_max + 1):
        m, val, p = n, 1.0, 2
        while p * p <= m:
            q = 1
            while m % p == 0:
                m //= p
                q *= p
            if q > 1:
                val *= tp[q]
            p += 1
        if m > 1:
            val *= tp[m]
        t[n] = val
    return t


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--r-min", type=float, default=9.0)
    ap.add_argument("--r-max", type=float, default=40.0)
    ap.add_argument("--step", type=float, default=0.02)
    ap.add_argument("--n-max", type=int, default=150)
    ap.add_argument("--taus", default="0.55,0.6,0.65,0.7,0.75,0.8,0.9")
    ap.add_argument("--forms", default="data/level1/forms.csv")
    ap.add_argument("--hecke", default="data/level1/hecke.csv")
    ap.add_argument("--eigen-only", action="store_true")
    ap.add_argument("--eigen-file", help="reuse a saved '--eigen-only' listing")
    args = ap.parse_args()

    def log(msg):
        print(msg, file=sys.stderr, flush=True)

    t0 = time.time()
    if args.eigen_file:
        with open(args.eigen_file) as fh:
            found = [(float(a), int(b)) for a, b in (line.split() for line in fh if line.strip())]
    else:
        found = find_eigenvalues(args.r_min, args.r_max, args.step, log)
    found.sort()
    log(f"found {len(found)} eigenvalues in {time.time() - t0:.0f}s")
    if args.eigen_only:
        for R, p in found:
            print(f"{R:.12f} {p:+d}")
        return

    taus = [float(x) for x in args.taus.split(",")]
    pset = set()
    for p in primes_upto(args.n_max):
        q = p
        while q <= args.n_max:
            pset.add(q)
            q *= p
    prime_powers = sorted(pset)

    form_rows = []
    hecke_rows = []
    for j, (R, parity) in enumerate(found, start=1):
        c_low, M, t_direct, weight, spread = coefficients(R, parity, args.n_max)
        tp = np.zeros(args.n_max + 1)
        for q in prime_powers:
            tp[q] = t_direct[q - 1]
        t_all = multiplicative_extension(tp, args.n_max)
        worst = max(spread[q - 1] for q in prime_powers)
        norm = petersson_scaled_norm(R, parity, t_all[1:M + 1])
        alpha = 0.5 / (norm * (1.0 + math.exp(-2 * math.pi * R)))
        t_vec = t_all[1:]
        values = {}
        for s in [0.5] + taus:
            h1 = hecke_value(R, parity, t_vec, s, 0.03)
            h2 = hecke_value(R, parity, t_vec, s, 0.045)
            values[s] = (h1.real, abs(h1 - h2), abs(h1.imag))
        h_half = 0.0 if parity == -1 else values[0.5][0]
        log(f"j={j} R={R:.10f} eps={parity:+d} alpha={alpha:.8f} H(1/2)={values[0.5][0]:.3e} "
            f"H(0.7)={values.get(0.7, (0,))[0]:.6f} coeff_spread={worst:.1e} "
            f"afe_B_diff={max(v[1] for v in values.values()):.1e} t={time.time() - t0:.0f}s")
        form_rows.append((j, R, parity, alpha, h_half, [values[s][0] for s in taus]))
        for q in prime_powers:
            hecke_rows.append((j, q, tp[q]))

    with open(args.forms, "w") as fh:
        fh.write("# normalization=hecke\n")
        fh.write(f"# provenance=PSL(2,Z) Maass cusp forms with {args.r_min} <= kappa <= {args.r_max}; "
                 f"Hejhal linear system (Y={Y1},{Y2}), Petersson norm quadrature, smoothed AFE for H_j; "
                 f"generated by tools/hejhal.py\n")
        fh.write("j,kappa,epsilon,alpha,H_half," + ",".join(f"H_{s:g}" for s in taus) + "\n")
        for j, R, parity, alpha, hh, hv in form_rows:
            fh.write(f"{j},{R:.13f},{parity},{alpha:.15e},{hh:.15e}," + ",".join(f"{v:.15e}" for v in hv) + "\n")
    with open(args.hecke, "w") as fh:
        fh.write("# normalization=hecke\n")
        fh.write("j,n,t\n")
        for j, q, v in hecke_rows:
            fh.write(f"{j},{q},{v:.15e}\n")
    log(f"done in {time.time() - t0:.0f}s")


if __name__ == "__main__":
    main()
