#pragma once

#include <vector>

#include "uvms/kinematics.hpp"

namespace uvms {

/// Speed schedule and convergence thresholds for the rate controller.
struct RateLimits {
  double v_max = 0.10;          // m/s
  double v_min = 0.01;          // m/s
  double w_max = 0.5;           // rad/s
  double w_min = 0.05;          // rad/s
  double pos_threshold = 0.002; // m, allowable position error
  double ori_threshold = 0.01;  // rad, allowable orientation error
  double pos_ratio = 10.0;      // full speed beyond pos_ratio * pos_threshold
  double ori_ratio = 10.0;
  /// Inside the stepping loop, damping ramps in as σ_min falls below
  /// `damping_band`, reaching `damping_max` at a singularity.
  double damping_band = 0.1;
  double damping_max = 0.05;
  double dt = 0.01;             // s

  /// Throws ValidationError.
  void validate() const;
};

struct DesiredPose {
  Vec3 position = Vec3::Zero();
  Rotation rotation = Rotation::Identity();

  static DesiredPose from_transform(const Transform& t) { return {t.translation, t.rotation}; }
  Transform to_transform() const { return {rotation, position}; }
};

struct PoseError {
  Vec3 position = Vec3::Zero();     // m
  Vec3 orientation = Vec3::Zero();  // rad, axis * angle
};

Vec3 position_error(const Vec3& desired, const Vec3& current);

/// Axis-angle error of R_d * Rᵀ, with ‖result‖ = θ ∈ [0, π].
Vec3 orientation_error(const Rotation& desired, const Rotation& current);

PoseError pose_error(const DesiredPose& desired, const Transform& current);

/// Magnitude schedule: 0 inside `threshold`, linear ramp from `min` to `max`
/// between threshold and ratio * threshold, `max` beyond.
double scheduled_speed(double err_norm, double max, double min, double threshold, double ratio);

Twist desired_twist(const PoseError& err, const RateLimits& limits);

/// Singular values below this engage damped least squares.
inline constexpr double kSingularTolerance = 1e-4;
inline constexpr double kDampingFactor = 0.01;

struct JointRates {
  Eigen::VectorXd rates;
  bool damped = false;
};

/// q̇ = J⁺ ξ for any m x n Jacobian. Near a singularity (σ_min < kSingularTolerance)
/// uses Jᵀ(JJᵀ + λ²I)⁻¹ξ instead.
JointRates joint_velocities(const Eigen::MatrixXd& jac, const Eigen::VectorXd& twist);
JointVector joint_velocities(const Jacobian& jac, const Twist& twist, bool* damped = nullptr);

/// Σ σᵢ/(σᵢ² + λ²) vᵢ uᵢᵀ ξ with λ² = (1 − (σ_min/band)²)·max² below `band`, 0 above.
JointVector damped_joint_velocities(const Jacobian& jac, const Twist& twist, double band,
                                    double max_damping, bool* damped = nullptr);

struct RmrcStepResult {
  JointVector q_next = JointVector::Zero();
  Twist twist;
  PoseError error;  // at the input configuration
  bool converged = false;
  bool damped = false;
  bool limited = false;  // a joint was clamped to its limit
};

/// One iteration of q ← q + J⁺ ξ dt toward `target`.
RmrcStepResult rmrc_step(const KinematicChain& chain, const JointVector& q,
                         const DesiredPose& target, const RateLimits& limits);

bool is_converged(const PoseError& err, const RateLimits& limits);

struct TrackResult {
  std::vector<JointVector> trajectory;  // starts with q0
  bool converged = false;
  int iterations = 0;
  PoseError final_error;
};

/// Repeats rmrc_step until converged or `max_iters` steps have been taken.
TrackResult track(const KinematicChain& chain, const JointVector& q0, const DesiredPose& target,
                  const RateLimits& limits, int max_iters);

}  // namespace uvms
