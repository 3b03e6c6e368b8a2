#pragma once

// Internal helpers shared by the YAML-backed config loaders.

#include <yaml-cpp/yaml.h>

#include <string>

#include "uvms/errors.hpp"
#include "uvms/kinematics.hpp"

namespace uvms::yaml {

template <typename T>
T scalar(const YAML::Node& node, const std::string& what) {
  if (!node || !node.IsScalar()) throw ParseError(what + ": expected a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception& e) {
    throw ParseError(what + ": " + e.what());
  }
}

template <typename T>
T scalar_or(const YAML::Node& node, const std::string& key, T fallback) {
  const YAML::Node child = node[key];
  if (!child) return fallback;
  return scalar<T>(child, key);
}

Vec3 vec3(const YAML::Node& node, const std::string& what);
Transform transform(const YAML::Node& node, const std::string& what);
KinematicChain chain(const YAML::Node& node);

void emit_vec3(YAML::Emitter& out, const Vec3& v);
void emit_transform(YAML::Emitter& out, const Transform& t);
void emit_chain(YAML::Emitter& out, const KinematicChain& chain);

YAML::Node parse(std::string_view text);

}  // namespace uvms::yaml
