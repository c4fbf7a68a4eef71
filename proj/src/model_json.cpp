#include <string>

#include <json.hpp>

#include "lccp/error.hpp"
#include "lccp/model.hpp"

namespace lccp {

using nlohmann::json;

namespace {

json parse_or_throw(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::InvalidDistribution, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

SampleSizeDist parse_dist_json(std::string_view text) {
  const json doc = parse_or_throw(text);
  if (!doc.is_object() || !doc.contains("sizes") || !doc["sizes"].is_object()) {
    throw Error(ErrorKind::InvalidDistribution, "expected {\"sizes\": {...}}");
  }
  std::map<std::size_t, double> entries;
  for (const auto& [key, value] : doc["sizes"].items()) {
    std::size_t pos = 0;
    unsigned long k = 0;
    try {
      k = std::stoul(key, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != key.size() || !value.is_number()) {
      throw Error(ErrorKind::InvalidDistribution, "bad entry \"" + key + "\"");
    }
    entries[k] += value.get<double>();
  }
  return SampleSizeDist(std::move(entries));
}

Instance parse_instance_json(std::string_view text) {
  const json doc = parse_or_throw(text);
  if (!doc.is_object() || !doc.contains("n") || !doc["n"].is_number_unsigned()) {
    throw Error(ErrorKind::InvalidDistribution, "expected {\"n\": <positive integer>}");
  }
  const auto n = doc["n"].get<std::size_t>();
  if (doc.contains("matching")) {
    return make_instance(n, doc["matching"].get<std::vector<LabelId>>());
  }
  return make_instance(n);
}

std::string dist_to_json(const SampleSizeDist& dist) {
  json sizes = json::object();
  for (const auto& [k, p] : dist.entries()) sizes[std::to_string(k)] = p;
  return json{{"sizes", sizes}}.dump();
}

}  // namespace lccp
