"""Named quadric-system instances used throughout tests and demos.

Each constructor returns a plain QuadricSystem; the names describe the
geometry of the solution variety (or of the resulting quotient).
"""

from __future__ import annotations

from typing import Sequence

from .quadric import QuadricSystem


def ellipse(a: int = 1, b: int = 2, d: float = 1.0) -> QuadricSystem:
    """a*u1^2 + b*u2^2 = d in R^2.

    With the default weights (1, 2) the quotient of ellipse x circle by the
    sign/translation group is a Klein bottle immersed in C^2.
    """
    return QuadricSystem([[a], [b]], [d])


def ellipsoid(weights: Sequence[int], d: float = 1.0) -> QuadricSystem:
    """sum_i w_i u_i^2 = d, an (n-1)-sphere up to scaling (w_i > 0)."""
    return QuadricSystem([[int(w)] for w in weights], [d])


def sphere_cone(n: int) -> QuadricSystem:
    """Unit sphere intersected with the cone u_1^2+...+u_{n-1}^2 = u_n^2.

    Two disjoint (n-2)-spheres; the coset group is Z_2 x Z_2 and the
    immersed quotient has no self-intersections.
    """
    rows = [(1, 1)] * (n - 1) + [(1, -1)]
    return QuadricSystem(rows, [1.0, 0.0])


def ellipsoid_cone() -> QuadricSystem:
    """u1^2+2u2^2+u3^2 = 1 intersected with u1^2+2u2^2 = u3^2.

    Two ellipses; the quotient is a Klein bottle times a circle.
    """
    rows = [(1, 1), (2, 2), (1, -1)]
    return QuadricSystem(rows, [1.0, 0.0])


def klein_bottle_cone() -> QuadricSystem:
    """The cone u1^2 + 2u2^2 = 3u3^2 (exponent rows sum to zero).

    Its projectivized link quotient is a minimally immersed Klein bottle
    in CP^2.
    """
    return QuadricSystem([[1], [2], [-3]], [0.0])


def weighted_cone(weights: Sequence[int]) -> QuadricSystem:
    """m_1 u_1^2 + ... + m_{n-1} u_{n-1}^2 = m_n u_n^2, m_i natural.

    The projective immersion is minimal exactly when
    m_1 + ... + m_{n-1} = m_n.
    """
    m = [int(w) for w in weights]
    rows = [[w] for w in m[:-1]] + [[-m[-1]]]
    return QuadricSystem(rows, [0.0])


def clifford_cone(n: int) -> QuadricSystem:
    """u_i^2 = u_n^2 for i < n: the |z_1| = ... = |z_n| cone whose
    projectivization is the Clifford torus in CP^(n-1)."""
    rows = []
    for i in range(n - 1):
        row = [0] * (n - 1)
        row[i] = 1
        rows.append(tuple(row))
    rows.append(tuple([-1] * (n - 1)))
    return QuadricSystem(rows, [0.0] * (n - 1))


def circle(radius: float = 1.0) -> QuadricSystem:
    """u^2 = r^2 in R^1: two points whose twisted torus closure is the
    circle of radius r in C."""
    return QuadricSystem([[1]], [radius * radius])


def product_torus(radii: Sequence[float]) -> QuadricSystem:
    """Product of circles S^1(r_1) x ... x S^1(r_n) in C^n as one system
    (diagonal exponent matrix)."""
    from .immersion import product_system

    system = circle(radii[0])
    for r in radii[1:]:
        system = product_system(system, circle(r))
    return system
