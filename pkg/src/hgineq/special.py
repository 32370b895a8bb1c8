"""Special functions: complex Gamma and embedding constants built from it."""

from __future__ import annotations

import cmath
import math

from .errors import DomainError

__all__ = ["complex_gamma", "embedding_constant"]

# Lanczos approximation, g = 607/128, 15 terms (Godfrey's coefficients).
# Relative error is ~1e-14 over the half-plane Re z >= 1/2; the reflection
# formula extends it to the rest of the plane away from the poles.
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_C = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)


def complex_gamma(z) -> complex:
    """Gamma(z) for complex z, excluding the poles at 0, -1, -2, ..."""
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == int(z.real):
        raise DomainError(f"Gamma pole at z = {z.real:g}")
    if z.real < 0.5:
        # reflection: Gamma(z) = pi / (sin(pi z) Gamma(1 - z))
        return math.pi / (cmath.sin(math.pi * z) * complex_gamma(1.0 - z))
    zm1 = z - 1.0
    acc = _LANCZOS_C[0]
    for k in range(1, len(_LANCZOS_C)):
        acc += _LANCZOS_C[k] / (zm1 + k)
    t = zm1 + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (zm1 + 0.5) * cmath.exp(-t) * acc


def embedding_constant(beta, k: int) -> float:
    """Gamma(k+1) / |Gamma(beta) Gamma(k-beta)| * 2^(k-Re beta) / (Re beta (k - Re beta)).

    Requires 0 < Re(beta) < k; this is the constant appearing in the
    fractional embedding bounds.
    """
    beta = complex(beta)
    rb = beta.real
    if not (0.0 < rb < k):
        raise DomainError(f"need 0 < Re(beta) < k, got Re(beta)={rb}, k={k}")
    num = abs(complex_gamma(k + 1.0))
    den = abs(complex_gamma(beta)) * abs(complex_gamma(k - beta))
    return num / den * 2.0 ** (k - rb) / (rb * (k - rb))
