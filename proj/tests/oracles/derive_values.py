"""Reference values frozen into the C++ tests.

Computed with numpy/scipy only, from the arm description in
data/arms/left_arm.yaml (base set to identity) and plain rotation algebra.
Re-run to reproduce the literals: python3 tests/oracles/derive_values.py
"""

import numpy as np
from scipy.spatial.transform import Rotation

LINKS = [0.15, 0.30, 0.25, 0.08, 0.08, 0.06]
AXES = [(0, 0, 1), (0, -1, 0), (0, -1, 0), (1, 0, 0), (0, -1, 0), (1, 0, 0)]


def hom(r, t):
    m = np.eye(4)
    m[:3, :3] = r
    m[:3, 3] = t
    return m


def fk(q, base=np.eye(4)):
    m = base.copy()
    for length, axis, angle in zip(LINKS, AXES, q):
        m = m @ hom(np.eye(3), [length, 0, 0])
        m = m @ hom(Rotation.from_rotvec(np.array(axis, float) * angle).as_matrix(), [0, 0, 0])
    return m


def fmt(v):
    return ", ".join(f"{x:.17g}" for x in np.ravel(v))


q = [0.1, -0.3, 0.5, -0.2, 0.4, 0.1]
ee = fk(q)
print("fk position:", fmt(ee[:3, 3]))
print("fk rotation (row major):", fmt(ee[:3, :3]))

home = [0.0, 0.5, -1.3, 0.0, 0.8, 0.0]
print("home position:", fmt(fk(home)[:3, 3]))

# Orientation error of R_d = Rz(-1.2) Rx(0.7), R = Ry(0.4): rotvec of R_d R^T.
rd = Rotation.from_euler("xz", [0.7, -1.2]).as_matrix()
r = Rotation.from_euler("y", 0.4).as_matrix()
print("orientation error:", fmt(Rotation.from_matrix(rd @ r.T).as_rotvec()))

# Near a half turn: R_d = rot(axis, pi - 5e-4), R = I.
axis = np.array([1.0, -2.0, 0.5]) / np.linalg.norm([1.0, -2.0, 0.5])
print("near pi error:", fmt(Rotation.from_rotvec(axis * (np.pi - 5e-4)).as_rotvec()))
