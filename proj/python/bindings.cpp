#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "uvms/analyze.hpp"
#include "uvms/chain_config.hpp"
#include "uvms/errors.hpp"
#include "uvms/kinematics.hpp"
#include "uvms/resolved_rate.hpp"
#include "uvms/session.hpp"
#include "uvms/teleop_mapping.hpp"
#include "uvms/vehicle_teleop.hpp"

namespace py = pybind11;
using namespace uvms;

namespace {

using Mat4 = Eigen::Matrix4d;

Transform to_transform(const Mat4& m) { return Transform::from_matrix(m); }

py::dict summary_dict(const RunSummary& s) {
  py::dict d;
  d["ticks"] = s.ticks;
  d["events"] = s.events;
  d["flagged"] = s.flagged;
  d["caged"] = s.final_world.grasp.caged();
  d["accepted_samples"] = s.counters.accepted_samples;
  d["dropped_samples"] = s.counters.dropped_samples;
  d["safety_stops"] = s.counters.safety_stops;
  d["vehicle_position"] = Eigen::Vector3d(s.final_world.vehicle.position);
  d["vehicle_yaw"] = s.final_world.vehicle.yaw;
  return d;
}

}  // namespace

PYBIND11_MODULE(_uvms, m) {
  m.doc() = "Bimanual UVMS teleoperation core";

  static py::exception<Error> error(m, "UvmsError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<KinematicChain>(m, "Chain")
      .def_static("default", [](const std::string& name, const Mat4& base) {
        return default_chain(name, to_transform(base));
      }, py::arg("name") = "arm", py::arg("base") = Mat4::Identity())
      .def_static("load", [](const std::string& path) { return load_chain_file(path); })
      .def_readonly("name", &KinematicChain::name)
      .def("forward_kinematics", [](const KinematicChain& c, const JointVector& q) {
        return forward_kinematics(c, q).ee.matrix();
      })
      .def("frames", [](const KinematicChain& c, const JointVector& q) {
        std::vector<Mat4> out;
        for (const Transform& t : forward_kinematics(c, q).frames) out.push_back(t.matrix());
        return out;
      })
      .def("jacobian", [](const KinematicChain& c, const JointVector& q) { return Jacobian(jacobian(c, q)); })
      .def("within_limits", [](const KinematicChain& c, const JointVector& q) { return c.within_limits(q); });

  m.def("home_configuration", &default_home_configuration);

  m.def("orientation_error", [](const Eigen::Matrix3d& desired, const Eigen::Matrix3d& current) {
    return Eigen::Vector3d(orientation_error(desired, current));
  });
  m.def("scheduled_speed", &scheduled_speed, py::arg("err"), py::arg("max"), py::arg("min"),
        py::arg("threshold"), py::arg("ratio"));

  m.def("track", [](const KinematicChain& c, const JointVector& q0, const Mat4& target, int max_iters) {
    const TrackResult r = track(c, q0, DesiredPose::from_transform(to_transform(target)), RateLimits{}, max_iters);
    py::dict d;
    d["converged"] = r.converged;
    d["iterations"] = r.iterations;
    d["q"] = r.trajectory.back();
    d["position_error"] = Eigen::Vector3d(r.final_error.position);
    d["orientation_error"] = Eigen::Vector3d(r.final_error.orientation);
    return d;
  }, py::arg("chain"), py::arg("q0"), py::arg("target"), py::arg("max_iters") = 2000);

  m.def("standard_registration", [] { return Registration::standard().rov_from_haptic.matrix(); });
  m.def("desired_ee_pose", [](const Mat4& anchor_stylus, const Mat4& anchor_ee, const Mat4& current,
                               const Mat4& registration, double scale) {
    StylusSample a, c;
    a.pose = to_transform(anchor_stylus);
    c.pose = to_transform(current);
    const ArmClutch clutch = begin_clutch(a, to_transform(anchor_ee), Registration{to_transform(registration)}, scale);
    return desired_ee_pose(clutch, c).to_transform().matrix();
  }, py::arg("anchor_stylus"), py::arg("anchor_ee"), py::arg("current"),
     py::arg("registration") = Registration::standard().rov_from_haptic.matrix(), py::arg("scale") = 1.0);

  m.def("vehicle_command", [](const Eigen::Vector3d& left, const Eigen::Vector3d& right, double dead_zone,
                               double linear_speed, double yaw_rate, const Eigen::Matrix3d& haptic_to_rov) {
    const VehicleTeleopConfig cfg{dead_zone, linear_speed, yaw_rate};
    const VelocityCommand c = vehicle_command(left, right, cfg, haptic_to_rov);
    return py::make_tuple(Eigen::Vector3d(c.linear), c.yaw_rate);
  }, py::arg("left"), py::arg("right"), py::arg("dead_zone") = 0.02, py::arg("linear_speed") = 0.2,
     py::arg("yaw_rate") = 0.3, py::arg("haptic_to_rov") = Eigen::Matrix3d::Identity());

  m.def("run_scenario", [](const std::string& config_path, const std::string& telemetry_path,
                            const std::string& scenario) {
    const SessionConfig config = load_session_config_file(config_path);
    const InputLog log = read_input_log_file(scenario.empty() ? config.scenario_path : scenario);
    std::ofstream out(telemetry_path, std::ios::binary);
    if (!out) throw Error("cannot write " + telemetry_path);
    return summary_dict(run_log(config, log, &out));
  }, py::arg("config"), py::arg("telemetry"), py::arg("scenario") = "");

  m.def("analyze_json", [](const std::string& telemetry_path, const std::string& out_dir) {
    std::ifstream in(telemetry_path);
    if (!in) throw Error("cannot open " + telemetry_path);
    const std::vector<TelemetryRecord> rows = read_telemetry(in);
    const ErrorReport report = analyze(rows);
    if (!out_dir.empty()) write_report(rows, report, out_dir);
    return report_json(report).dump();
  }, py::arg("telemetry"), py::arg("out_dir") = "");
}
