"""Taylor-coefficient extraction for exponentials of quadratic forms.

Every purity and basis-transform coefficient in this package is a mixed
Taylor coefficient of ``exp(z^T M z)`` for a small symmetric matrix M.  We
expand the exponential order by order, multiplying the running polynomial by
the quadratic form and clipping every exponent to a user-supplied box.  With
caps (c_1, ..., c_d) the polynomial lives in a dense array of
``prod(c_i + 1)`` coefficients, each multiplication is a handful of shifted
array additions (one per distinct monomial z_a z_b), and the total cost is
O(K * d^2 * prod(c_i + 1)) for K = sum(c_i) // 2 expansion steps.

Because the form is purely quadratic the series has only even total degrees;
the coefficient of any odd-degree monomial is exactly zero.
"""

from __future__ import annotations

import numpy as np

__all__ = ["exp_taylor_box", "taylor_coefficient"]


def _monomials(M: np.ndarray):
    """Distinct quadratic monomials of z^T M z as (a, b, coefficient)."""
    dim = M.shape[0]
    out = []
    for a in range(dim):
        for b in range(a, dim):
            q = M[a, a] if a == b else 2.0 * M[a, b]
            if q != 0:
                out.append((a, b, q))
    return out


def exp_taylor_box(M: np.ndarray, caps) -> np.ndarray:
    """Taylor coefficients of exp(z^T M z) for every exponent <= caps.

    Parameters
    ----------
    M : (d, d) array
        Symmetric matrix, real or complex.
    caps : sequence of int
        Per-variable maximum exponents.

    Returns
    -------
    ndarray of shape (caps[0]+1, ..., caps[d-1]+1)
        ``out[t]`` is the coefficient of ``prod z_i ** t_i``.
    """
    caps = tuple(int(c) for c in caps)
    if any(c < 0 for c in caps):
        raise ValueError(f"caps must be nonnegative, got {caps}")
    M = np.asarray(M)
    dim = M.shape[0]
    if M.shape != (dim, dim) or dim != len(caps):
        raise ValueError(f"matrix shape {M.shape} does not match caps {caps}")

    shape = tuple(c + 1 for c in caps)
    dtype = complex if np.iscomplexobj(M) else float
    term = np.zeros(shape, dtype)
    term[(0,) * dim] = 1.0
    total = term.copy()

    mono = []
    for a, b, q in _monomials(M):
        deg = [0] * dim
        deg[a] += 1
        deg[b] += 1
        if any(deg[i] > caps[i] for i in range(dim)):
            continue
        src = tuple(slice(0, shape[i] - deg[i]) for i in range(dim))
        dst = tuple(slice(deg[i], shape[i]) for i in range(dim))
        mono.append((src, dst, q))

    for k in range(1, sum(caps) // 2 + 1):
        new = np.zeros(shape, dtype)
        for src, dst, q in mono:
            new[dst] += q * term[src]
        new /= k
        if not new.any():
            break
        total += new
        term = new
    return total


def taylor_coefficient(M: np.ndarray, orders) -> complex:
    """Single mixed Taylor coefficient of exp(z^T M z) at the given orders."""
    orders = tuple(int(t) for t in orders)
    if sum(orders) % 2 == 1:
        return 0.0
    return exp_taylor_box(M, orders)[orders]
