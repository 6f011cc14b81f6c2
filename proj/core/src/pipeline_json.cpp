#include "puzzleboard/pipeline_json.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>
#include <variant>
#include <vector>

#include "json.hpp"

namespace puzzleboard {
namespace {

using nlohmann::json;

struct Field {
  const char* key;
  std::variant<double PipelineConfig::*, int PipelineConfig::*, std::function<double&(PipelineConfig&)>,
               std::function<int&(PipelineConfig&)>>
      ref;
};

// Member pointers cannot reach into nested structs, hence the accessors.
template <class T, class S>
std::function<T&(PipelineConfig&)> in(S PipelineConfig::*outer, T S::*inner) {
  return [outer, inner](PipelineConfig& c) -> T& { return c.*outer.*inner; };
}

const std::vector<Field>& fields() {
  static const std::vector<Field> f = {
      {"k", in(&PipelineConfig::detector, &DetectorOptions::k)},
      {"smoothSigma", in(&PipelineConfig::detector, &DetectorOptions::smooth_sigma)},
      {"nmsRadius", in(&PipelineConfig::detector, &DetectorOptions::nms_radius)},
      {"minResponseRatio", in(&PipelineConfig::detector, &DetectorOptions::min_response_ratio)},
      {"ringRadius", in(&PipelineConfig::detector, &DetectorOptions::ring_radius)},
      {"ringTolerance", in(&PipelineConfig::detector, &DetectorOptions::ring_tolerance)},
      {"minContrastRatio", in(&PipelineConfig::detector, &DetectorOptions::min_contrast_ratio)},
      {"neighbors", in(&PipelineConfig::grid, &GridOptions::k)},
      {"oppositeWindowDeg", in(&PipelineConfig::grid, &GridOptions::opposite_window_deg)},
      {"axisWindowDeg", in(&PipelineConfig::grid, &GridOptions::axis_window_deg)},
      {"collinearityTolerance", in(&PipelineConfig::grid, &GridOptions::collinearity_tolerance)},
      {"ambiguityMargin", in(&PipelineConfig::decode, &DecodeOptions::ambiguity_margin)},
      {"minKnownBits", in(&PipelineConfig::decode, &DecodeOptions::min_known_bits)},
      {"minComponentCorners", &PipelineConfig::min_component_corners},
      {"minDecodeCorners", &PipelineConfig::min_decode_corners},
      {"bitDeadband", &PipelineConfig::bit_deadband},
      {"minSignificanceBits", &PipelineConfig::min_significance_bits},
      {"threads", &PipelineConfig::threads},
  };
  return f;
}

json config_object(const PipelineConfig& config) {
  json out = json::object();
  PipelineConfig c = config;
  for (const auto& f : fields()) {
    std::visit(
        [&](const auto& ref) {
          using R = std::decay_t<decltype(ref)>;
          if constexpr (std::is_member_object_pointer_v<R>) {
            out[f.key] = c.*ref;
          } else {
            out[f.key] = ref(c);
          }
        },
        f.ref);
  }
  return out;
}

template <class T>
T& slot(PipelineConfig& c, const Field& f) {
  return std::visit(
      [&](const auto& ref) -> T& {
        using R = std::decay_t<decltype(ref)>;
        if constexpr (std::is_same_v<R, T PipelineConfig::*>) {
          return c.*ref;
        } else if constexpr (std::is_same_v<R, std::function<T&(PipelineConfig&)>>) {
          return ref(c);
        } else {
          throw ConfigError("config: internal type mismatch");
        }
      },
      f.ref);
}

bool is_int_field(const Field& f) {
  return std::holds_alternative<int PipelineConfig::*>(f.ref) ||
         std::holds_alternative<std::function<int&(PipelineConfig&)>>(f.ref);
}

json point(LatticePoint p) { return json::array({p.x, p.y}); }

}  // namespace

std::string config_to_json(const PipelineConfig& config, int indent) {
  return config_object(config).dump(indent);
}

PipelineConfig config_from_json(std::string_view text, const PipelineConfig& base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  PipelineConfig c = base;
  for (const auto& [key, value] : j.items()) {
    const auto& fs = fields();
    const auto it = std::find_if(fs.begin(), fs.end(), [&](const Field& f) { return key == f.key; });
    if (it == fs.end()) throw ConfigError("config: unknown key '" + key + "'");
    if (is_int_field(*it)) {
      if (!value.is_number_integer()) throw ConfigError("config: '" + key + "' must be an integer");
      slot<int>(c, *it) = value.get<int>();
    } else {
      if (!value.is_number()) throw ConfigError("config: '" + key + "' must be a number");
      slot<double>(c, *it) = value.get<double>();
    }
  }
  try {
    (void)Pipeline(c);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path, const PipelineConfig& base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str(), base);
}

std::string detection_to_json(const DetectionResult& result, const PipelineConfig& config,
                              std::string_view image, int indent) {
  json out;
  out["schemaVersion"] = kDetectionSchemaVersion;
  out["image"] = std::string(image);
  out["imageSize"] = json::array({result.width, result.height});
  out["config"] = config_object(config);
  out["cornerCount"] = result.corners.size();

  json comps = json::array();
  for (const auto& comp : result.components) {
    const bool ok = comp.decoded();
    json c;
    c["id"] = comp.id;
    c["status"] = std::string(to_string(comp.decode.status));
    c["origin"] = ok ? point(comp.decode.board_corner({0, 0})) : json(nullptr);
    c["orientation"] = ok ? json(degrees(comp.decode.orientation)) : json(nullptr);
    c["score"] = comp.decode.score;
    c["margin"] = comp.decode.margin;
    json corners = json::array();
    for (const auto& r : comp.corners) {
      corners.push_back({{"u", r.u},
                         {"v", r.v},
                         {"i", r.local.x},
                         {"j", r.local.y},
                         {"x", r.board ? json(r.board->x) : json(nullptr)},
                         {"y", r.board ? json(r.board->y) : json(nullptr)}});
    }
    c["corners"] = std::move(corners);
    c["edgeStats"] = {{"read", comp.decode.edges_read},
                      {"correct", ok ? json(comp.decode.edges_correct) : json(nullptr)},
                      {"incorrect", ok ? json(comp.decode.edges_incorrect) : json(nullptr)}};
    c["gridEdges"] = {{"confirmed", comp.confirmed_edges}, {"rejected", comp.rejected_edges}};
    comps.push_back(std::move(c));
  }
  out["components"] = std::move(comps);
  const auto& t = result.timings;
  out["timingsMs"] = {{"response", t.response_ms},
                      {"corners", t.corners_ms},
                      {"grid", t.grid_ms},
                      {"decode", t.decode_ms},
                      {"total", t.total_ms}};
  return out.dump(indent);
}

}  // namespace puzzleboard
