#include "uvms/resolved_rate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "uvms/errors.hpp"

namespace uvms {

namespace {

constexpr double kSmallAngle = 1e-7;
constexpr double kNearPi = 1e-3;

Vec3 vee_of_skew_part(const Rotation& r) {
  return {r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1)};
}

}  // namespace

void RateLimits::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ValidationError(std::string("rate limits: ") + what);
  };
  require(v_max >= v_min && v_min > 0.0, "need v_max >= v_min > 0");
  require(w_max >= w_min && w_min > 0.0, "need w_max >= w_min > 0");
  require(pos_threshold > 0.0 && ori_threshold > 0.0, "thresholds must be positive");
  require(pos_ratio > 1.0 && ori_ratio > 1.0, "ratios must exceed 1");
  require(dt > 0.0, "dt must be positive");
  require(damping_band >= 0.0 && damping_max >= 0.0, "damping must be non-negative");
}

Vec3 position_error(const Vec3& desired, const Vec3& current) { return desired - current; }

Vec3 orientation_error(const Rotation& desired, const Rotation& current) {
  const Rotation re = desired * current.transpose();
  const double c = std::clamp((re.trace() - 1.0) / 2.0, -1.0, 1.0);
  const double theta = std::acos(c);
  const Vec3 v = vee_of_skew_part(re);

  if (theta < kSmallAngle) {
    // θ / (2 sin θ) -> 1/2 as θ -> 0.
    return 0.5 * v;
  }
  if (theta > std::numbers::pi - kNearPi) {
    // sin θ vanishes; recover the axis from the symmetric part, aaᵀ = (S - cos θ I) / (1 - cos θ).
    const Rotation sym = 0.5 * (re + re.transpose());
    const Rotation aat = (sym - c * Rotation::Identity()) / (1.0 - c);
    Eigen::Index k = 0;
    aat.diagonal().maxCoeff(&k);
    Vec3 axis = aat.col(k) / std::sqrt(aat(k, k));
    axis.normalize();
    if (axis.dot(v) < 0.0) axis = -axis;
    return theta * axis;
  }
  return theta / (2.0 * std::sin(theta)) * v;
}

PoseError pose_error(const DesiredPose& desired, const Transform& current) {
  return {position_error(desired.position, current.translation),
          orientation_error(desired.rotation, current.rotation)};
}

double scheduled_speed(double err_norm, double max, double min, double threshold, double ratio) {
  if (err_norm <= threshold) return 0.0;
  if (err_norm >= ratio * threshold) return max;
  return min + (max - min) * (err_norm - threshold) / (threshold * (ratio - 1.0));
}

Twist desired_twist(const PoseError& err, const RateLimits& limits) {
  Twist twist;
  const double ep = err.position.norm();
  const double v = scheduled_speed(ep, limits.v_max, limits.v_min, limits.pos_threshold,
                                   limits.pos_ratio);
  if (v > 0.0) twist.linear = v * err.position / ep;

  const double eo = err.orientation.norm();
  const double w = scheduled_speed(eo, limits.w_max, limits.w_min, limits.ori_threshold,
                                   limits.ori_ratio);
  if (w > 0.0) twist.angular = w * err.orientation / eo;
  return twist;
}

JointRates joint_velocities(const Eigen::MatrixXd& jac, const Eigen::VectorXd& twist) {
  JointRates out;
  if (twist.isZero(0.0)) {
    out.rates = Eigen::VectorXd::Zero(jac.cols());
    return out;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  const Eigen::Index rank_dim = std::min(jac.rows(), jac.cols());
  const double sigma_min = rank_dim > 0 ? sigma(rank_dim - 1) : 0.0;

  if (sigma_min < kSingularTolerance) {
    const Eigen::MatrixXd jjt = jac * jac.transpose() +
        kDampingFactor * kDampingFactor * Eigen::MatrixXd::Identity(jac.rows(), jac.rows());
    out.rates = jac.transpose() * jjt.ldlt().solve(twist);
    out.damped = true;
    return out;
  }
  if (jac.rows() == jac.cols()) {
    out.rates = jac.partialPivLu().solve(twist);
  } else {
    out.rates = svd.solve(twist);
  }
  return out;
}

JointVector joint_velocities(const Jacobian& jac, const Twist& twist, bool* damped) {
  const JointRates r = joint_velocities(Eigen::MatrixXd(jac), Eigen::VectorXd(twist.vector()));
  if (damped) *damped = r.damped;
  return r.rates;
}

JointVector damped_joint_velocities(const Jacobian& jac, const Twist& twist, double band,
                                    double max_damping, bool* damped) {
  if (damped) *damped = false;
  const Eigen::Matrix<double, 6, 1> xi = twist.vector();
  if (xi.isZero(0.0)) return JointVector::Zero();
  const Eigen::JacobiSVD<Jacobian> svd(jac, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  const double ratio = band > 0.0 ? sigma(kJointCount - 1) / band : 1.0;
  const double lambda2 = ratio < 1.0 ? (1.0 - ratio * ratio) * max_damping * max_damping : 0.0;
  if (lambda2 == 0.0) return joint_velocities(jac, twist, damped);
  if (damped) *damped = true;
  JointVector gain;
  for (int i = 0; i < kJointCount; ++i) gain[i] = sigma(i) / (sigma(i) * sigma(i) + lambda2);
  return svd.matrixV() * gain.asDiagonal() * svd.matrixU().transpose() * xi;
}

bool is_converged(const PoseError& err, const RateLimits& limits) {
  return err.position.norm() <= limits.pos_threshold &&
         err.orientation.norm() <= limits.ori_threshold;
}

RmrcStepResult rmrc_step(const KinematicChain& chain, const JointVector& q,
                         const DesiredPose& target, const RateLimits& limits) {
  RmrcStepResult result;
  const ChainPose pose = forward_kinematics(chain, q);
  result.error = pose_error(target, pose.ee);
  result.converged = is_converged(result.error, limits);
  result.twist = desired_twist(result.error, limits);
  if (result.converged) {
    result.q_next = q;
    return result;
  }
  const JointVector qdot = damped_joint_velocities(jacobian(chain, pose), result.twist, limits.damping_band,
                                                   limits.damping_max, &result.damped);
  result.q_next = clamp_to_limits(chain, q + qdot * limits.dt, &result.limited);
  return result;
}

TrackResult track(const KinematicChain& chain, const JointVector& q0, const DesiredPose& target,
                  const RateLimits& limits, int max_iters) {
  if (max_iters < 1) throw ValidationError("track: max_iters must be >= 1");
  TrackResult result;
  result.trajectory.push_back(q0);
  JointVector q = q0;
  for (int i = 0; i < max_iters; ++i) {
    const RmrcStepResult step = rmrc_step(chain, q, target, limits);
    if (step.converged) {
      result.converged = true;
      result.final_error = step.error;
      return result;
    }
    q = step.q_next;
    result.trajectory.push_back(q);
    ++result.iterations;
  }
  result.final_error = pose_error(target, forward_kinematics(chain, q).ee);
  result.converged = is_converged(result.final_error, limits);
  return result;
}

}  // namespace uvms
