"""Bimanual UVMS teleoperation core: kinematics, resolved-rate control,
stylus mapping, vehicle piloting and headless scenario runs."""

import json as _json

from ._uvms import (
    Chain,
    UvmsError,
    desired_ee_pose,
    home_configuration,
    orientation_error,
    run_scenario,
    scheduled_speed,
    standard_registration,
    track,
    vehicle_command,
)


def analyze(telemetry, out_dir=""):
    """Tracking-error report for a telemetry CSV, as a dict."""
    from ._uvms import analyze_json

    return _json.loads(analyze_json(str(telemetry), str(out_dir)))


__all__ = [
    "Chain",
    "UvmsError",
    "analyze",
    "desired_ee_pose",
    "home_configuration",
    "orientation_error",
    "run_scenario",
    "scheduled_speed",
    "standard_registration",
    "track",
    "vehicle_command",
]
