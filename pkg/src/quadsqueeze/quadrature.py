"""Adaptive cumulative quadrature for smooth vectorized integrands.

The domain is split into panels until a 16-point Gauss-Legendre rule
agrees with its two-half refinement. Cumulative integrals are stored at
panel edges and completed with a partial rule inside the containing
panel, so ``F(t) = int_0^t f`` is cheap at arbitrary ``t``.
"""
import numpy as np

from .errors import DomainError, NumericError

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(16)


def _gauss(f, a, b):
    # vectorized over panels: a, b are 1-D arrays
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    t = mid[:, None] + half[:, None] * _NODES[None, :]
    vals = np.asarray(f(t.ravel())).reshape(t.shape)
    return half * (vals @ _WEIGHTS)


class CumulativeIntegral:
    """Running integral ``F(t) = int_{t0}^t f(s) ds`` on ``[t0, t1]``.

    Parameters
    ----------
    f : callable
        Vectorized integrand accepting a 1-D float array.
    t0, t1 : float
        Integration domain.
    breakpoints : sequence of float, optional
        Points where ``f`` may be non-smooth; always used as panel edges.
    tol : float
        Absolute tolerance on the total integral.
    """

    def __init__(self, f, t0, t1, breakpoints=(), tol=1e-13, max_panels=200000,
                 initial_panels=4):
        self.f = f
        self.t0 = float(t0)
        self.t1 = float(t1)
        if self.t1 < self.t0:
            raise DomainError("integration domain is reversed")
        inner = sorted(b for b in breakpoints if self.t0 < b < self.t1)
        coarse = np.unique(np.array([self.t0, *inner, self.t1]))
        edges = [coarse[:1]]
        for a, b in zip(coarse[:-1], coarse[1:]):
            edges.append(np.linspace(a, b, initial_panels + 1)[1:])
        edges = np.concatenate(edges)
        if self.t1 == self.t0:
            self.edges = np.array([self.t0])
            self.cumulative = np.zeros(1, dtype=complex)
            self._complex = False
            return
        done_a, done_b, done_v = [], [], []
        a, b = edges[:-1], edges[1:]
        span = self.t1 - self.t0
        while a.size:
            if len(done_a) + a.size > max_panels:
                worst = a[0], b[0]
                raise NumericError("quadrature did not converge", interval=worst)
            m = 0.5 * (a + b)
            whole = _gauss(f, a, b)
            left = _gauss(f, a, m)
            right = _gauss(f, m, b)
            err = np.abs(whole - (left + right))
            ok = err <= tol * np.maximum((b - a) / span, 1e-3) + 1e-15 * np.abs(left + right)
            ok |= (b - a) < 1e-12 * max(1.0, span)
            done_a.append(a[ok])
            done_b.append(b[ok])
            done_v.append((left + right)[ok])
            bad = ~ok
            a = np.concatenate([a[bad], m[bad]])
            b = np.concatenate([m[bad], b[bad]])
        a = np.concatenate(done_a)
        b = np.concatenate(done_b)
        v = np.concatenate(done_v)
        order = np.argsort(a)
        self.edges = np.append(a[order], b[order][-1])
        self._complex = np.iscomplexobj(v)
        cum = np.zeros(self.edges.size, dtype=complex if self._complex else float)
        cum[1:] = np.cumsum(v[order])
        self.cumulative = cum

    @property
    def total(self):
        return self.cumulative[-1]

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        flat = np.atleast_1d(t).ravel()
        if np.any(flat < self.t0) or np.any(flat > self.t1):
            raise DomainError(f"t outside [{self.t0}, {self.t1}]")
        if self.edges.size == 1:
            out = np.zeros_like(flat, dtype=self.cumulative.dtype)
            return out.reshape(t.shape)
        idx = np.clip(np.searchsorted(self.edges, flat, side="right") - 1, 0,
                      self.edges.size - 2)
        lo = self.edges[idx]
        out = self.cumulative[idx] + _gauss(self.f, lo, flat)
        if not self._complex:
            out = np.real(out)
        return out.reshape(t.shape)
