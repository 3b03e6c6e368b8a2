#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "uvms/kinematics.hpp"

namespace uvms {

/// Parses a chain document:
///
///   name: left_arm
///   base: {translation: [x, y, z], rotation_rpy: [r, p, y]}
///   joints:
///     - {zero_config: {translation: [...], rotation_rpy: [...]}, axis: [x, y, z], limits: [lo, hi]}
///     ... six entries, `limits` optional
///
/// Throws ParseError for malformed text and ValidationError for a chain that
/// parses but violates the chain invariants (joint count, unit axes, limits).
KinematicChain load_chain(std::string_view text);
KinematicChain load_chain_file(const std::filesystem::path& path);

/// Inverse of load_chain. Doubles are written with 17 significant digits.
std::string serialize_chain(const KinematicChain& chain);

/// Entrywise comparison of geometry, axes and limits.
bool chains_equal(const KinematicChain& a, const KinematicChain& b, double tol = 1e-12);

}  // namespace uvms
