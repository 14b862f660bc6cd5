"""Pure-Python (numpy) one-sided Jacobi kernel.

Same algorithm and call signature as the compiled extension, used when
the extension is unavailable or SPECDESCENT_BACKEND=python is set.
Orders of magnitude slower on large matrices; results agree with the
compiled kernel up to floating-point rounding.
"""

import math

import numpy as np


def jacobi_sweeps(b, m, r, v, tol, max_sweeps):
    """Cyclic one-sided Jacobi sweeps on column-major flat buffers.

    See the compiled kernel for the contract; returns (sweeps, converged).
    """
    if b.shape[0] != m * r or v.shape[0] != r * r:
        raise ValueError("buffer sizes do not match m, r")
    if r < 2:
        return 0, True

    B = b.reshape((m, r), order="F")
    V = v.reshape((r, r), order="F")

    sweeps = 0
    converged = False
    while sweeps < max_sweeps:
        norms = np.einsum("ij,ij->j", B, B)
        rotations = 0
        for p in range(r - 1):
            for q in range(p + 1, r):
                app = norms[p]
                aqq = norms[q]
                apq = float(B[:, p] @ B[:, q])
                if app * aqq <= 0.0 or abs(apq) <= tol * math.sqrt(app * aqq):
                    continue
                rotations += 1
                tau = (aqq - app) / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                bp = c * B[:, p] - s * B[:, q]
                B[:, q] = s * B[:, p] + c * B[:, q]
                B[:, p] = bp
                vp = c * V[:, p] - s * V[:, q]
                V[:, q] = s * V[:, p] + c * V[:, q]
                V[:, p] = vp
                norms[p] = app - t * apq
                norms[q] = aqq + t * apq
        sweeps += 1
        if rotations == 0:
            converged = True
            break

    return sweeps, converged
