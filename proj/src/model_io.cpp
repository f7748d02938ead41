#include <fstream>
#include <istream>
#include <ostream>

#include "cqa/error.hpp"
#include "cqa/learn.hpp"
#include "json.hpp"

namespace cqa {

using nlohmann::json;

namespace {

constexpr const char* kFormatTag = "cqa-model";
constexpr int kModelVersion = 1;

}  // namespace

void write_model(std::ostream& out, const RankModel& m) {
  json doc = {
      {"format", kFormatTag},
      {"version", kModelVersion},
      {"kind", to_string(m.kind)},
      {"seed", m.seed},
      {"threshold", m.threshold},
      {"parameters", m.parameters},
      {"standardization", {{"mean", m.standardization.mean}, {"scale", m.standardization.scale}}},
      {"hyper",
       {{"learning_rate", m.hyper.learning_rate},
        {"lr_decay", m.hyper.lr_decay},
        {"epochs", m.hyper.epochs},
        {"batch_size", m.hyper.batch_size},
        {"l2", m.hyper.l2},
        {"hidden", m.hyper.hidden},
        {"tolerance", m.hyper.tolerance},
        {"mask", m.hyper.mask.to_string()}}},
  };
  doc["calibration"] = m.calibration ? json{{"a", m.calibration->a}, {"b", m.calibration->b}} : json(nullptr);
  out << doc.dump(2) << '\n';
}

RankModel read_model(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed model: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != kFormatTag) throw InputError("not a model file");
  if (!doc.contains("version") || doc["version"] != kModelVersion) {
    throw InputError("unsupported model version " + (doc.contains("version") ? doc["version"].dump() : "<none>"));
  }
  try {
    RankModel m;
    auto kind = parse_classifier(doc.at("kind").get<std::string>());
    if (!kind) throw InputError("unknown classifier kind " + doc.at("kind").dump());
    m.kind = *kind;
    m.seed = doc.at("seed").get<std::uint64_t>();
    m.threshold = doc.at("threshold").get<double>();
    m.parameters = doc.at("parameters").get<std::vector<double>>();
    m.standardization.mean = doc.at("standardization").at("mean").get<std::array<double, kFeatureCount>>();
    m.standardization.scale = doc.at("standardization").at("scale").get<std::array<double, kFeatureCount>>();
    const auto& h = doc.at("hyper");
    m.hyper.learning_rate = h.at("learning_rate").get<double>();
    m.hyper.lr_decay = h.at("lr_decay").get<double>();
    m.hyper.epochs = h.at("epochs").get<std::size_t>();
    m.hyper.batch_size = h.at("batch_size").get<std::size_t>();
    m.hyper.l2 = h.at("l2").get<double>();
    m.hyper.hidden = h.at("hidden").get<std::size_t>();
    m.hyper.tolerance = h.at("tolerance").get<double>();
    m.hyper.mask = FeatureMask(h.at("mask").get<std::string>());
    if (!doc.at("calibration").is_null()) {
      m.calibration = Calibration{doc["calibration"].at("a").get<double>(), doc["calibration"].at("b").get<double>()};
    }
    if (m.parameters.size() != parameter_count(m.kind, kFeatureCount, m.hyper.hidden)) {
      throw InputError("model parameter count does not match its shape");
    }
    if (!(m.threshold > 0.0 && m.threshold < 1.0)) throw InputError("model threshold outside (0, 1)");
    return m;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed model: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("malformed model: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const RankModel& model) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  write_model(out, model);
}

RankModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open model " + path.string());
  try {
    return read_model(in);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace cqa
