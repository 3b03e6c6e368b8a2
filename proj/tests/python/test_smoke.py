import math
import os
import pathlib

import numpy as np
import pytest

import uvms_teleop as uvms

DATA = pathlib.Path(os.environ.get("UVMS_DATA_DIR", pathlib.Path(__file__).resolve().parents[2] / "data"))


def test_forward_kinematics_and_jacobian():
    chain = uvms.Chain.default()
    q = uvms.home_configuration()
    ee = chain.forward_kinematics(q)
    assert ee.shape == (4, 4)
    np.testing.assert_allclose(ee[:3, 3], [0.84086871396813967, 0.0, 0.0050794101071271252], atol=1e-12)
    jac = chain.jacobian(q)
    h = 1e-6
    for j in range(6):
        dq = np.zeros(6)
        dq[j] = h
        fd = (chain.forward_kinematics(q + dq)[:3, 3] - chain.forward_kinematics(q - dq)[:3, 3]) / (2 * h)
        np.testing.assert_allclose(jac[:3, j], fd, atol=1e-6)
    assert len(chain.frames(q)) == 6


def test_chain_file_and_limits():
    chain = uvms.Chain.load(str(DATA / "arms" / "left_arm.yaml"))
    assert chain.name == "left_arm"
    with pytest.raises(uvms.UvmsError):
        chain.forward_kinematics(np.full(6, 4.0))


def test_orientation_error_and_schedule():
    c, s = math.cos(math.pi / 2), math.sin(math.pi / 2)
    rz = np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])
    np.testing.assert_allclose(uvms.orientation_error(rz, np.eye(3)), [0, 0, math.pi / 2], atol=1e-12)
    assert uvms.scheduled_speed(0.2, 0.10, 0.01, 0.01, 10) == 0.10
    assert uvms.scheduled_speed(0.005, 0.10, 0.01, 0.01, 10) == 0.0


def test_track_converges():
    chain = uvms.Chain.default()
    q0 = uvms.home_configuration()
    target = chain.forward_kinematics(q0 + 0.2)
    r = uvms.track(chain, q0, target)
    assert r["converged"]
    assert np.linalg.norm(r["position_error"]) <= 0.002


def test_mapping_and_vehicle():
    anchor_ee = np.eye(4)
    anchor_ee[:3, 3] = [0.8, 0.1, -0.2]
    current = np.eye(4)
    current[0, 3] = 0.01
    d = uvms.desired_ee_pose(np.eye(4), anchor_ee, current, registration=np.eye(4))
    np.testing.assert_allclose(d[:3, 3], [0.81, 0.1, -0.2], atol=1e-15)
    linear, yaw = uvms.vehicle_command([0.05, 0, 0], [0.05, 0, 0])
    np.testing.assert_allclose(linear, [0.2, 0, 0])
    assert yaw == 0.0
    _, yaw = uvms.vehicle_command([0, 0, 0.05], [0, 0, -0.05])
    assert yaw == 0.3


def test_scenario_and_analyze(tmp_path):
    csv = tmp_path / "telemetry.csv"
    summary = uvms.run_scenario(str(DATA / "config" / "task1.yaml"), str(csv))
    assert not summary["flagged"]
    report = uvms.analyze(csv, tmp_path / "report")
    for arm in ("left", "right"):
        assert report["arms"][arm]["axis_ranking"][0] == "z"
        assert report["arms"][arm]["dominant_joint"] == 2
    assert (tmp_path / "report" / "report.json").exists()
