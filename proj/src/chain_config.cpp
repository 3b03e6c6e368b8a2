#include "uvms/chain_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "yaml_util.hpp"

namespace uvms {

namespace yaml {

YAML::Node parse(std::string_view text) {
  try {
    return YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ParseError(std::string("malformed document: ") + e.what());
  }
}

Vec3 vec3(const YAML::Node& node, const std::string& what) {
  if (!node || !node.IsSequence() || node.size() != 3) {
    throw ParseError(what + ": expected a 3-element list");
  }
  return {scalar<double>(node[0], what), scalar<double>(node[1], what),
          scalar<double>(node[2], what)};
}

Transform transform(const YAML::Node& node, const std::string& what) {
  if (!node || !node.IsMap()) throw ParseError(what + ": expected a map");
  Transform t;
  if (node["translation"]) t.translation = vec3(node["translation"], what + ".translation");
  if (node["rotation_rpy"]) {
    t.rotation = rotation_from_rpy(vec3(node["rotation_rpy"], what + ".rotation_rpy"));
  }
  return t;
}

KinematicChain chain(const YAML::Node& node) {
  if (!node || !node.IsMap()) throw ParseError("chain: expected a map");
  KinematicChain c;
  c.name = scalar_or<std::string>(node, "name", "arm");
  if (node["base"]) c.base = transform(node["base"], "base");

  const YAML::Node joints = node["joints"];
  if (!joints || !joints.IsSequence()) throw ParseError("joints: expected a list");
  if (joints.size() != kJointCount) {
    throw ValidationError("chain '" + c.name + "' has " + std::to_string(joints.size()) +
                          " joints, expected " + std::to_string(kJointCount));
  }
  for (int j = 0; j < kJointCount; ++j) {
    const YAML::Node jn = joints[j];
    const std::string where = "joints[" + std::to_string(j) + "]";
    if (!jn.IsMap()) throw ParseError(where + ": expected a map");
    Joint& joint = c.joints[j];
    if (jn["zero_config"]) joint.zero_config = transform(jn["zero_config"], where + ".zero_config");
    joint.axis = vec3(jn["axis"], where + ".axis");
    if (const YAML::Node lim = jn["limits"]) {
      if (!lim.IsSequence() || lim.size() != 2) throw ParseError(where + ".limits: expected [lo, hi]");
      joint.limits = JointLimits{scalar<double>(lim[0], where), scalar<double>(lim[1], where)};
    }
  }
  c.validate();
  return c;
}

void emit_vec3(YAML::Emitter& out, const Vec3& v) {
  out << YAML::Flow << YAML::BeginSeq << v.x() << v.y() << v.z() << YAML::EndSeq;
}

void emit_transform(YAML::Emitter& out, const Transform& t) {
  out << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "translation" << YAML::Value;
  emit_vec3(out, t.translation);
  out << YAML::Key << "rotation_rpy" << YAML::Value;
  emit_vec3(out, rpy_from_rotation(t.rotation));
  out << YAML::EndMap;
}

void emit_chain(YAML::Emitter& out, const KinematicChain& c) {
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << c.name;
  out << YAML::Key << "base" << YAML::Value;
  emit_transform(out, c.base);
  out << YAML::Key << "joints" << YAML::Value << YAML::BeginSeq;
  for (const Joint& joint : c.joints) {
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "zero_config" << YAML::Value;
    emit_transform(out, joint.zero_config);
    out << YAML::Key << "axis" << YAML::Value;
    emit_vec3(out, joint.axis);
    if (joint.limits) {
      out << YAML::Key << "limits" << YAML::Value << YAML::Flow << YAML::BeginSeq
          << joint.limits->lower << joint.limits->upper << YAML::EndSeq;
    }
    out << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;
}

}  // namespace yaml

KinematicChain load_chain(std::string_view text) { return yaml::chain(yaml::parse(text)); }

KinematicChain load_chain_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open chain file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_chain(buffer.str());
}

std::string serialize_chain(const KinematicChain& chain) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  yaml::emit_chain(out, chain);
  return std::string(out.c_str()) + "\n";
}

bool chains_equal(const KinematicChain& a, const KinematicChain& b, double tol) {
  auto close = [tol](const Transform& x, const Transform& y) {
    return (x.rotation - y.rotation).cwiseAbs().maxCoeff() <= tol &&
           (x.translation - y.translation).cwiseAbs().maxCoeff() <= tol;
  };
  if (a.name != b.name || !close(a.base, b.base)) return false;
  for (int j = 0; j < kJointCount; ++j) {
    const Joint& ja = a.joints[j];
    const Joint& jb = b.joints[j];
    if (!close(ja.zero_config, jb.zero_config)) return false;
    if ((ja.axis - jb.axis).cwiseAbs().maxCoeff() > tol) return false;
    if (ja.limits.has_value() != jb.limits.has_value()) return false;
    if (ja.limits && (std::abs(ja.limits->lower - jb.limits->lower) > tol ||
                      std::abs(ja.limits->upper - jb.limits->upper) > tol)) {
      return false;
    }
  }
  return true;
}

}  // namespace uvms
