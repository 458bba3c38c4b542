#include <cstring>
#include <map>
#include <sstream>

#include "gensplat/fsio.hpp"
#include "gensplat/gaussians.hpp"

namespace gensplat {

namespace {

void put_f32(std::string& out, float v) { out.append(reinterpret_cast<const char*>(&v), 4); }

std::vector<std::string> property_names(int coeff_count) {
  std::vector<std::string> names = {"x", "y", "z", "f_dc_0", "f_dc_1", "f_dc_2"};
  for (int i = 0; i < 3 * (coeff_count - 1); ++i) names.push_back("f_rest_" + std::to_string(i));
  for (const char* n : {"opacity", "scale_0", "scale_1", "scale_2"}) names.push_back(n);
  for (int i = 0; i < 4; ++i) names.push_back("rot_" + std::to_string(i));
  return names;
}

[[noreturn]] void parse_fail(const std::filesystem::path& path, size_t offset,
                             const std::string& what) {
  throw ParseError(path.string() + ": " + what + " at byte " + std::to_string(offset));
}

}  // namespace

void ply_export(const Scene<float>& scene, const std::filesystem::path& path) {
  scene.validate();
  const int k = scene.coeff_count();

  std::ostringstream header;
  header << "ply\nformat binary_little_endian 1.0\n"
         << "element vertex " << scene.gaussians.size() << "\n";
  for (const auto& name : property_names(k)) header << "property float " << name << "\n";
  header << "end_header\n";

  std::string out = header.str();
  out.reserve(out.size() + scene.gaussians.size() * 4 * (11 + 3 * k));
  for (const auto& g : scene.gaussians) {
    for (int c = 0; c < 3; ++c) put_f32(out, g.center(c));
    for (int c = 0; c < 3; ++c) put_f32(out, g.sh(0, c));
    for (int c = 0; c < 3; ++c)                       // f_rest is channel-major
      for (int j = 1; j < k; ++j) put_f32(out, g.sh(j, c));
    put_f32(out, g.logit_opacity);
    for (int c = 0; c < 3; ++c) put_f32(out, g.log_scale(c));
    Vec4<float> q = g.rotation.coeffs_wxyz();
    for (int c = 0; c < 4; ++c) put_f32(out, q(c));
  }
  write_bytes_atomic(path, out);
}

Scene<float> ply_import(const std::filesystem::path& path) {
  const std::string bytes = read_bytes(path);

  // Header: newline-delimited ASCII up to end_header.
  size_t pos = 0;
  auto next_line = [&](std::string& line) {
    size_t eol = bytes.find('\n', pos);
    if (eol == std::string::npos) parse_fail(path, pos, "header line without newline");
    line = bytes.substr(pos, eol - pos);
    pos = eol + 1;
  };

  std::string line;
  size_t line_start = pos;
  next_line(line);
  if (line != "ply") parse_fail(path, line_start, "missing 'ply' magic");
  line_start = pos;
  next_line(line);
  if (line != "format binary_little_endian 1.0")
    parse_fail(path, line_start, "unsupported format '" + line + "'");

  long vertex_count = -1;
  std::vector<std::string> props;
  for (;;) {
    line_start = pos;
    next_line(line);
    if (line == "end_header") break;
    std::istringstream ss(line);
    std::string kw;
    ss >> kw;
    if (kw == "comment") continue;
    if (kw == "element") {
      std::string name;
      long count;
      if (!(ss >> name >> count) || name != "vertex" || count < 0)
        parse_fail(path, line_start, "expected 'element vertex N', got '" + line + "'");
      if (vertex_count >= 0) parse_fail(path, line_start, "duplicate vertex element");
      vertex_count = count;
      continue;
    }
    if (kw == "property") {
      std::string type, name;
      if (!(ss >> type >> name)) parse_fail(path, line_start, "malformed property line");
      if (vertex_count < 0) parse_fail(path, line_start, "property before element");
      if (type != "float")
        throw FormatError(path.string() + ": unsupported property type '" + type + "'");
      props.push_back(name);
      continue;
    }
    parse_fail(path, line_start, "unexpected header keyword '" + kw + "'");
  }
  if (vertex_count < 0) parse_fail(path, pos, "no vertex element in header");

  // Map properties to record slots. Normals from other exporters are
  // tolerated and ignored; anything else unknown is a layout we cannot map.
  std::map<std::string, int> slot;
  for (size_t i = 0; i < props.size(); ++i) {
    if (!slot.emplace(props[i], int(i)).second)
      throw FormatError(path.string() + ": duplicate property '" + props[i] + "'");
  }
  int n_rest = 0;
  for (const auto& [name, idx] : slot) {
    (void)idx;
    if (name.rfind("f_rest_", 0) == 0) ++n_rest;
  }
  int degree = -1;
  for (int d = 0; d <= 3; ++d)
    if (n_rest == 3 * ((d + 1) * (d + 1) - 1)) degree = d;
  if (degree < 0)
    throw FormatError(path.string() + ": f_rest count " + std::to_string(n_rest) +
                      " does not match any SH degree in [0,3]");
  const int k = (degree + 1) * (degree + 1);

  for (const auto& name : property_names(k))
    if (!slot.count(name))
      throw FormatError(path.string() + ": missing required property '" + name + "'");
  for (const auto& [name, idx] : slot) {
    (void)idx;
    if (name == "nx" || name == "ny" || name == "nz") continue;
    bool known = false;
    for (const auto& want : property_names(k)) known |= (want == name);
    if (!known) throw FormatError(path.string() + ": unsupported property '" + name + "'");
  }

  const size_t stride = props.size();
  const size_t need = size_t(vertex_count) * stride * 4;
  if (bytes.size() - pos < need)
    parse_fail(path, bytes.size(),
               "payload truncated: need " + std::to_string(need) + " bytes after header, have " +
                   std::to_string(bytes.size() - pos));
  if (bytes.size() - pos > need)
    parse_fail(path, pos + need, "trailing bytes after vertex payload");

  Scene<float> scene;
  scene.sh_degree = degree;
  scene.gaussians.resize(size_t(vertex_count));
  std::vector<float> rec(stride);
  for (long i = 0; i < vertex_count; ++i) {
    std::memcpy(rec.data(), bytes.data() + pos + size_t(i) * stride * 4, stride * 4);
    auto& g = scene.gaussians[size_t(i)];
    auto f = [&](const std::string& name) { return rec[size_t(slot.at(name))]; };
    g.center = Vec3<float>(f("x"), f("y"), f("z"));
    g.sh.resize(k, 3);
    for (int c = 0; c < 3; ++c) g.sh(0, c) = f("f_dc_" + std::to_string(c));
    for (int c = 0; c < 3; ++c)
      for (int j = 1; j < k; ++j)
        g.sh(j, c) = f("f_rest_" + std::to_string(c * (k - 1) + j - 1));
    g.logit_opacity = f("opacity");
    g.log_scale = Vec3<float>(f("scale_0"), f("scale_1"), f("scale_2"));
    if (!std::isfinite(f("rot_0")) || !std::isfinite(f("rot_1")) || !std::isfinite(f("rot_2")) ||
        !std::isfinite(f("rot_3")))
      parse_fail(path, pos + size_t(i) * stride * 4, "non-finite rotation in record");
    g.rotation = Rotation<float>(f("rot_0"), f("rot_1"), f("rot_2"), f("rot_3"));
  }
  scene.validate();
  return scene;
}

}  // namespace gensplat
