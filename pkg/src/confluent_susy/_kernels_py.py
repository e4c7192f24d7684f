"""Pure numpy implementations of the hot loops.

Same signatures as the compiled ``_kernels`` extension; used when the extension is
not built or when ``CONFLUENT_SUSY_PURE_PYTHON`` is set.
"""
import numpy as np


def theta1_derivs(v, q, nterms):
    """Jacobi theta_1 and its first three derivatives in v, nome q.

    ``v`` is a 1-D complex array that should already be reduced so that
    ``|Im v| <= -log(q)/2``.  Returns a (4, len(v)) complex array.
    """
    v = np.ascontiguousarray(v, dtype=np.complex128)
    z = np.exp(1j * v)
    zi = 1.0 / z
    z2 = z * z
    zi2 = zi * zi
    p = z.copy()
    pinv = zi.copy()
    out = np.zeros((4, v.size), dtype=np.complex128)
    for k in range(nterms):
        c = 2.0 * (-1.0) ** k * q ** ((k + 0.5) ** 2)
        o = 2 * k + 1
        sn = (p - pinv) / 2j
        cs = (p + pinv) / 2
        out[0] += c * sn
        out[1] += (c * o) * cs
        out[2] -= (c * o * o) * sn
        out[3] -= (c * o * o * o) * cs
        p *= z2
        pinv *= zi2
    return out


def sn_agm(x, m):
    """Jacobi sn(x|m) for 0 < m < 1 by the descending AGM/Landen recursion."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    a = [1.0]
    c = [np.sqrt(m)]
    b = np.sqrt(1.0 - m)
    while abs(c[-1]) > 1e-16 and len(a) < 40:
        an, bn = 0.5 * (a[-1] + b), np.sqrt(a[-1] * b)
        c.append(0.5 * (a[-1] - b))
        a.append(an)
        b = bn
    n = len(a) - 1
    phi = (2.0 ** n) * a[n] * x
    for j in range(n, 0, -1):
        phi = 0.5 * (phi + np.arcsin(c[j] / a[j] * np.sin(phi)))
    return np.sin(phi)
