// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#include "d3/geometry/export.hpp"

#include "d3/sdl/parser.hpp"

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <cstring>
#include <map>

namespace d3::geom {
namespace {

using nlohmann::json;

std::string entry_name(const MeshEntry& e) {
  return e.component_id + "_" + std::to_string(e.instance);
}

std::string to_obj(const MeshSet& ms) {
  std::string out = "# d3 scene export\n";
  std::size_t base = 1;
  for (const auto& e : ms.entries) {
    out += "o " + entry_name(e) + "\n";
    for (const auto& p : e.mesh->positions) {
      const Vec3 w = (e.world_transform * p.homogeneous()).head<3>();
      out += "v " + sdl::format_number(w.x()) + " " + sdl::format_number(w.y()) + " " +
             sdl::format_number(w.z()) + "\n";
    }
    for (const auto& t : e.mesh->indices) {
      out += "f " + std::to_string(base + t[0]) + " " + std::to_string(base + t[1]) + " " +
             std::to_string(base + t[2]) + "\n";
    }
    base += e.mesh->positions.size();
  }
  return out;
}

template <typename T>
void append(std::string& bin, const T& value) {
  char raw[sizeof(T)];
  std::memcpy(raw, &value, sizeof(T));
  bin.append(raw, sizeof(T));
}

void pad_to_4(std::string& s, char fill) {
  while (s.size() % 4 != 0) s.push_back(fill);
}

/// glTF document plus its binary buffer. One glTF mesh and material per
/// component; instances become nodes carrying their matrix.
std::pair<json, std::string> build_gltf(const MeshSet& ms) {
  json doc;
  doc["asset"] = {{"version", "2.0"}, {"generator", "d3"}};
  doc["scene"] = 0;
  json nodes = json::array();
  json meshes = json::array();
  json materials = json::array();
  json accessors = json::array();
  json views = json::array();
  std::string bin;
  std::map<std::string, std::size_t> mesh_of_component;

  auto add_view = [&](std::size_t offset, std::size_t length, int target) {
    views.push_back({{"buffer", 0}, {"byteOffset", offset}, {"byteLength", length}, {"target", target}});
    return views.size() - 1;
  };

  for (const auto& e : ms.entries) {
    auto found = mesh_of_component.find(e.component_id);
    if (found == mesh_of_component.end()) {
      const Mesh& m = *e.mesh;
      Eigen::Vector3f lo = Eigen::Vector3f::Constant(std::numeric_limits<float>::max());
      Eigen::Vector3f hi = -lo;

      const std::size_t pos_offset = bin.size();
      for (const auto& p : m.positions) {
        const Eigen::Vector3f f = p.cast<float>();
        lo = lo.cwiseMin(f);
        hi = hi.cwiseMax(f);
        for (int i = 0; i < 3; ++i) append(bin, f[i]);
      }
      const auto pos_view = add_view(pos_offset, bin.size() - pos_offset, 34962);

      const std::size_t nrm_offset = bin.size();
      for (const auto& nrm : m.normals) {
        const Eigen::Vector3f f = nrm.cast<float>();
        for (int i = 0; i < 3; ++i) append(bin, f[i]);
      }
      const auto nrm_view = add_view(nrm_offset, bin.size() - nrm_offset, 34962);

      const std::size_t idx_offset = bin.size();
      for (const auto& t : m.indices)
        for (auto v : t) append(bin, v);
      const auto idx_view = add_view(idx_offset, bin.size() - idx_offset, 34963);

      accessors.push_back({{"bufferView", pos_view}, {"componentType", 5126},
                           {"count", m.positions.size()}, {"type", "VEC3"},
                           {"min", {lo.x(), lo.y(), lo.z()}}, {"max", {hi.x(), hi.y(), hi.z()}}});
      accessors.push_back({{"bufferView", nrm_view}, {"componentType", 5126},
                           {"count", m.normals.size()}, {"type", "VEC3"}});
      accessors.push_back({{"bufferView", idx_view}, {"componentType", 5125},
                           {"count", m.indices.size() * 3}, {"type", "SCALAR"}});
      const std::size_t first = accessors.size() - 3;

      materials.push_back(
          {{"name", e.component_id},
           {"pbrMetallicRoughness",
            {{"baseColorFactor", {e.color.r / 255.0, e.color.g / 255.0, e.color.b / 255.0, 1.0}},
             {"metallicFactor", 0.0},
             {"roughnessFactor", 1.0}}}});
      meshes.push_back({{"name", e.component_id},
                        {"primitives",
                         {{{"attributes", {{"POSITION", first}, {"NORMAL", first + 1}}},
                           {"indices", first + 2},
                           {"material", materials.size() - 1}}}}});
      found = mesh_of_component.emplace(e.component_id, meshes.size() - 1).first;
    }
    json matrix = json::array();
    for (int c = 0; c < 4; ++c)
      for (int r = 0; r < 4; ++r) matrix.push_back(e.world_transform(r, c));
    nodes.push_back({{"name", entry_name(e)}, {"mesh", found->second}, {"matrix", matrix}});
  }

  json scene_nodes = json::array();
  for (std::size_t i = 0; i < nodes.size(); ++i) scene_nodes.push_back(i);
  doc["scenes"] = json::array({{{"nodes", scene_nodes}}});
  doc["nodes"] = nodes;
  if (!meshes.empty()) {
    doc["meshes"] = meshes;
    doc["materials"] = materials;
    doc["accessors"] = accessors;
    doc["bufferViews"] = views;
    doc["buffers"] = json::array({{{"byteLength", bin.size()}}});
  }
  return {doc, bin};
}

std::string base64(const std::string& bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3) + 1, '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(bytes.data()),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::string to_glb(const MeshSet& ms) {
  auto [doc, bin] = build_gltf(ms);
  std::string json_chunk = doc.dump();
  pad_to_4(json_chunk, ' ');
  pad_to_4(bin, '\0');

  std::string out;
  const std::uint32_t total = 12 + 8 + static_cast<std::uint32_t>(json_chunk.size()) +
                              (bin.empty() ? 0 : 8 + static_cast<std::uint32_t>(bin.size()));
  append(out, std::uint32_t{0x46546C67});  // "glTF"
  append(out, std::uint32_t{2});
  append(out, total);
  append(out, static_cast<std::uint32_t>(json_chunk.size()));
  append(out, std::uint32_t{0x4E4F534A});  // "JSON"
  out += json_chunk;
  if (!bin.empty()) {
    append(out, static_cast<std::uint32_t>(bin.size()));
    append(out, std::uint32_t{0x004E4942});  // "BIN\0"
    out += bin;
  }
  return out;
}

std::string to_gltf_embedded(const MeshSet& ms) {
  auto [doc, bin] = build_gltf(ms);
  if (!bin.empty())
    doc["buffers"][0]["uri"] = "data:application/octet-stream;base64," + base64(bin);
  return doc.dump(1) + "\n";
}

}  // namespace

std::string export_mesh(const MeshSet& meshes, ExportFormat format) {
  switch (format) {
    case ExportFormat::obj: return to_obj(meshes);
    case ExportFormat::gltf: return to_glb(meshes);
    case ExportFormat::gltf_embedded: return to_gltf_embedded(meshes);
  }
  return {};
}

std::string_view content_type(ExportFormat format) {
  switch (format) {
    case ExportFormat::obj: return "model/obj";
    case ExportFormat::gltf: return "model/gltf-binary";
    case ExportFormat::gltf_embedded: return "model/gltf+json";
  }
  return "application/octet-stream";
}

}  // namespace d3::geom
