"""Shared geometric constructions for the test suite."""

import math

import numpy as np

from scissors.hypmodel import HPoint
from scissors.simplex import Simplex

INF = complex(float("inf"), 0)


def regular_ideal_tetra():
    s3 = 1.0 / math.sqrt(3.0)
    coords = [(s3, s3, s3), (s3, -s3, -s3), (-s3, s3, -s3), (-s3, -s3, s3)]
    return Simplex.from_coords(coords, ideal=[True] * 4)


def ideal_tetra_from_boundary(zs):
    """All-ideal H^3 simplex from four boundary points of C u {inf}, using
    the inverse of the (y1 + i y2)/(1 - y3) chart."""
    verts = []
    for z in zs:
        if z == INF:
            verts.append(HPoint.klein((0.0, 0.0, 1.0), ideal=True))
        else:
            d = 1.0 + abs(z) ** 2
            verts.append(HPoint.klein(
                (2 * z.real / d, 2 * z.imag / d, (abs(z) ** 2 - 1) / d), ideal=True))
    return Simplex(tuple(verts))


def random_finite_tetra(rng, rmax=0.7, min_det=1e-3):
    while True:
        coords = [tuple(rng.uniform(-rmax, rmax) for _ in range(3)) for _ in range(4)]
        if max(sum(c * c for c in v) for v in coords) >= rmax * rmax:
            continue
        s = Simplex.from_coords(coords)
        if abs(s.homogeneous_det()) > min_det:
            return s


def random_one_ideal_tetra(rng, rmax=0.6, min_det=1e-3):
    """Random H^3 simplex with exactly one ideal vertex."""
    while True:
        v = np.array([rng.gauss(0, 1) for _ in range(3)])
        v /= np.linalg.norm(v)
        coords = [tuple(v)] + [tuple(rng.uniform(-rmax, rmax) for _ in range(3))
                               for _ in range(3)]
        s = Simplex.from_coords(coords, ideal=[True, False, False, False])
        if abs(s.homogeneous_det()) > min_det:
            return s


def triangle_with_angles(A, B, C):
    """Hyperbolic triangle with prescribed interior angles (sum < pi),
    built from the dual law of cosines, vertex A at the Klein origin."""
    if A + B + C >= math.pi:
        raise ValueError("angle sum must be < pi")
    cosh_c = (math.cos(C) + math.cos(A) * math.cos(B)) / (math.sin(A) * math.sin(B))
    cosh_b = (math.cos(B) + math.cos(A) * math.cos(C)) / (math.sin(A) * math.sin(C))
    c = math.acosh(cosh_c)  # side AB
    b = math.acosh(cosh_b)  # side AC
    pa = (0.0, 0.0)
    pb = (math.tanh(c), 0.0)
    pc = (math.tanh(b) * math.cos(A), math.tanh(b) * math.sin(A))
    return Simplex.from_coords([pa, pb, pc])


def tetra_from_coxeter_gram(p, q, r):
    """Compact H^3 orthoscheme with Coxeter symbol [p, q, r]: dihedral
    angles pi/p, pi/q, pi/r along the path edges and pi/2 elsewhere.

    Built from the outward-normal Gram matrix (signature (3,1)); vertices
    are the triple intersections, normalized into the Klein ball.
    """
    G = np.eye(4)
    for i, m in enumerate((p, q, r)):
        G[i, i + 1] = G[i + 1, i] = -math.cos(math.pi / m)
    vals, vecs = np.linalg.eigh(G)
    if not (vals[0] < 0 < vals[1]):
        raise ValueError(f"[{p},{q},{r}] is not hyperbolic")
    M = vecs @ np.diag(np.sqrt(np.abs(vals)))  # rows: normals; M J M^T = G
    J = np.diag(np.sign(vals))
    verts = []
    for i in range(4):
        rows = np.array([J @ M[j] for j in range(4) if j != i])
        ns = np.linalg.svd(rows)[2][-1]
        qval = ns @ J @ ns
        if qval >= 0:
            raise ValueError(f"[{p},{q},{r}] orthoscheme is not compact")
        ns = ns / ns[0]
        verts.append(tuple(ns[1:]))
    return Simplex.from_coords(verts)
