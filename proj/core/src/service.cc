/*
 * Copyright 2026 The MAFUS Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "mafus/service.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "httplib.h"
#include "json.hpp"
#include "mafus/explain.h"

namespace mafus::service {

namespace {

using nlohmann::json;

// Error with an HTTP status attached.
struct HttpError {
  int status;
  std::string message;
};

constexpr const char* kLabels[] = {"Mortality (No)", "Mortality (Yes)"};

double non_finite(std::string_view text) {
  if (text == "NaN" || text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "Infinity" || text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-Infinity" || text == "-inf") return -std::numeric_limits<double>::infinity();
  throw HttpError{400, "value '" + std::string(text) + "' is not a number"};
}

json parse_body(std::string_view body) {
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw HttpError{400, std::string("malformed request body: ") + e.what()};
  }
}

double cell_value(const ModelArtifact& a, const std::string& name, const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto text = v.get<std::string>();
    if (const auto idx = a.schema.find(name)) {
      const auto& levels = a.schema.columns()[*idx].levels;
      const auto it = std::find(levels.begin(), levels.end(), text);
      if (it != levels.end()) return static_cast<double>(it - levels.begin());
    }
    return non_finite(text);
  }
  throw HttpError{400, "feature '" + name + "' needs a number"};
}

std::map<std::string, double> patient_input(const ModelArtifact& a, const json& j) {
  if (!j.is_object()) throw HttpError{400, "patient input must be an object of feature values"};
  std::map<std::string, double> raw;
  for (const auto& [name, v] : j.items()) {
    if (std::find(a.selected.begin(), a.selected.end(), name) == a.selected.end()) {
      throw HttpError{400, "'" + name + "' is not a model feature"};
    }
    raw[name] = cell_value(a, name, v);
  }
  return raw;
}

std::vector<double> prepared(const ModelArtifact& a, const std::map<std::string, double>& raw) {
  try {
    return a.prepare(raw);
  } catch (const Error& e) {
    throw HttpError{e.code() == ErrorCode::kContract ? 422 : 400, e.what()};
  }
}

}  // namespace

Service::Service(ModelArtifact artifact, std::string_view artifact_bytes)
    : artifact_(std::make_shared<const ModelArtifact>(std::move(artifact))),
      hash_(hex64(fnv1a64(artifact_bytes))) {}

Service Service::from_file(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  return Service(ModelArtifact::from_json(bytes), bytes);
}

Response Service::handle(std::string_view method, std::string_view path, std::string_view body) const {
  auto reply = [&](int status, json doc) {
    doc["artifact_hash"] = hash_.empty() ? json() : json(hash_);
    return Response{status, doc.dump()};
  };
  auto fail = [&](int status, const std::string& message) { return reply(status, {{"error", message}}); };

  static const std::map<std::string_view, std::string_view> kRoutes = {
      {"/healthz", "GET"}, {"/model/meta", "GET"}, {"/summary", "GET"},
      {"/predict", "POST"}, {"/explain", "POST"},  {"/whatif", "POST"}};
  const auto route = kRoutes.find(path);
  if (route == kRoutes.end()) return fail(404, "no endpoint " + std::string(path));
  if (route->second != method) return fail(405, std::string(path) + " expects " + std::string(route->second));
  if (path == "/healthz") return reply(200, {{"status", "ok"}, {"loaded", loaded()}});
  if (!loaded()) return fail(503, "no model artifact loaded");

  const ModelArtifact& a = *artifact_;
  const auto& model = a.model;
  const json model_meta = {{"algorithm", std::string(learners::algorithm_name(model.algorithm()))},
                           {"training_seed", model.config().seed},
                           {"artifact_hash", hash_}};

  auto predict_json = [&](const std::vector<double>& x) {
    const double score = model.score(x);
    const int yhat = score >= model.threshold() ? 1 : 0;
    return json{{"yhat", yhat}, {"score", score}, {"label", kLabels[yhat]}, {"model", model_meta}};
  };
  auto explain_json = [&](const std::map<std::string, double>& raw) {
    const auto x = prepared(a, raw);
    json out = predict_json(x);
    explain::Attribution attr;
    try {
      attr = explain::explain_sample(model, x, a.background, a.explain_options);
    } catch (const Error& e) {
      throw HttpError{500, e.what()};
    }
    explain::ExplainedSample sample{-1, x, out["score"].get<double>(), out["yhat"].get<int>(), attr};
    auto force = explain::force_data(sample, a.selected);
    json contributions = json::array();
    for (const auto& c : force.contributions) {
      contributions.push_back({{"feature", c.feature}, {"value", raw.at(c.feature)}, {"phi", c.phi}});
    }
    out["attribution"] = {{"features", a.selected},
                          {"phi", attr.phi},
                          {"base_value", attr.base_value},
                          {"exact", attr.exact},
                          {"adjusted", attr.adjusted}};
    out["contributions"] = contributions;
    return out;
  };

  try {
    if (path == "/model/meta") {
      json scaler = json::array();
      for (const auto& e : a.scaler.entries) {
        if (std::find(a.selected.begin(), a.selected.end(), e.name) == a.selected.end()) continue;
        scaler.push_back({{"name", e.name}, {"mean", e.mean}, {"stddev", e.stddev}});
      }
      json features = json::array();
      for (const auto& name : a.selected) {
        const auto& column = a.schema.column(name);
        json f = {{"name", name}, {"kind", std::string(data::column_kind_name(column.kind))}};
        if (!column.levels.empty()) f["levels"] = column.levels;
        if (const auto it = a.categorical_codes.find(name); it != a.categorical_codes.end()) {
          f["codes"] = it->second;
        }
        features.push_back(std::move(f));
      }
      return reply(200, {{"algorithm", model_meta["algorithm"]},
                         {"config", model.config().describe()},
                         {"threshold", model.threshold()},
                         {"degenerate", model.degenerate()},
                         {"selected_features", a.selected},
                         {"features", features},
                         {"scaler", scaler},
                         {"seeds", {{"master", a.seed},
                                    {"model", model.config().seed},
                                    {"explain", a.explain_options.seed}}},
                         {"background_size", a.background.size()},
                         {"has_summary", a.partition.has_value()}});
    }
    if (path == "/summary") {
      if (!a.partition || a.partition->explained() == 0) return fail(404, "artifact stores no test partition");
      const auto table = explain::summary_data(*a.partition, &a.scaler);
      json rows = json::array();
      for (const auto& r : table.rows) {
        rows.push_back({{"feature", r.feature},
                        {"sample_id", r.sample_id},
                        {"shap", r.shap},
                        {"value", r.value},
                        {"raw_value", r.raw_value}});
      }
      return reply(200, {{"feature_order", table.feature_order},
                         {"mean_abs_shap", table.mean_abs_shap},
                         {"rows", rows}});
    }
    const json request = parse_body(body);
    if (path == "/predict") return reply(200, predict_json(prepared(a, patient_input(a, request))));
    if (path == "/explain") return reply(200, explain_json(patient_input(a, request)));
    // /whatif
    if (!request.is_object() || !request.contains("base")) {
      throw HttpError{400, "what-if request needs 'base' and 'deltas'"};
    }
    const auto base = patient_input(a, request["base"]);
    const json deltas = request.value("deltas", json::array());
    if (!deltas.is_array()) throw HttpError{400, "'deltas' must be a list"};
    std::vector<std::pair<std::string, json>> edits;
    for (const auto& d : deltas) {
      if (!d.is_object() || !d.contains("feature") || !d["feature"].is_string() || !d.contains("value")) {
        throw HttpError{400, "each delta needs 'feature' and 'value'"};
      }
      const auto name = d["feature"].get<std::string>();
      if (std::find(a.selected.begin(), a.selected.end(), name) == a.selected.end()) {
        throw HttpError{400, "'" + name + "' is not a model feature"};
      }
      edits.emplace_back(name, d["value"]);
    }
    json results = json::array();
    for (const auto& [name, value] : edits) {
      auto edited = base;
      edited[name] = cell_value(a, name, value);
      results.push_back(explain_json(edited));
    }
    return reply(200, {{"results", results}});
  } catch (const HttpError& e) {
    return fail(e.status, e.message);
  } catch (const std::exception& e) {
    return fail(500, e.what());
  }
}

bool serve(const Service& service, const std::string& host, int port) {
  httplib::Server server;
  auto forward = [&service](const httplib::Request& req, httplib::Response& res) {
    const Response r = service.handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_header("Access-Control-Allow-Origin", "*");
    if (!service.artifact_hash().empty()) res.set_header("X-Artifact-Hash", service.artifact_hash());
    res.set_content(r.body, r.content_type);
  };
  server.Get(".*", forward);
  server.Post(".*", forward);
  server.Options(".*", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
  return server.listen(host, port);
}

}  // namespace mafus::service
