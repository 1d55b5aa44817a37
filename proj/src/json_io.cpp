#include <string>

#include "json.hpp"
#include "latepower/errors.hpp"
#include "latepower/sim.hpp"
#include "latepower/strata.hpp"

namespace latepower {

namespace {

using nlohmann::json;

double number_at(const json& j, const char* key) {
  if (!j.contains(key)) throw parse_error(std::string("missing field: ") + key);
  const auto& v = j.at(key);
  if (!v.is_number()) throw parse_error(std::string("field is not a number: ") + key);
  return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? number_at(j, key) : fallback;
}

StrataSpec strata_from_value(const json& j) {
  if (!j.is_object()) throw parse_error("strata document must be a JSON object");
  if (j.contains("family") && j.at("family") != "normal") {
    throw parse_error("unsupported distribution family (only \"normal\")");
  }
  StrataSpec s;
  s.mu_c0 = number_at(j, "mu_c0");
  s.sd_c0 = number_at(j, "sd_c0");
  s.sd_c1 = number_at(j, "sd_c1");
  s.tau = number_at(j, "tau");
  s.p_c = number_at(j, "p_c");
  s.p_nt = number_at(j, "p_nt");
  s.p_at = number_at(j, "p_at");
  s.mu_nt = number_or(j, "mu_nt", 0.0);
  s.sd_nt = number_or(j, "sd_nt", 1.0);
  s.mu_at = number_or(j, "mu_at", 0.0);
  s.sd_at = number_or(j, "sd_at", 1.0);
  s.p_z = number_or(j, "p_z", 0.5);
  validate(s);
  return s;
}

json strata_to_value(const StrataSpec& s) {
  json j;
  j["family"] = "normal";
  j["mu_c0"] = s.mu_c0;
  j["sd_c0"] = s.sd_c0;
  j["sd_c1"] = s.sd_c1;
  j["tau"] = s.tau;
  j["mu_nt"] = s.mu_nt;
  j["sd_nt"] = s.sd_nt;
  j["mu_at"] = s.mu_at;
  j["sd_at"] = s.sd_at;
  j["p_c"] = s.p_c;
  j["p_nt"] = s.p_nt;
  j["p_at"] = s.p_at;
  j["p_z"] = s.p_z;
  return j;
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw parse_error(e.what());
  }
}

}  // namespace

StrataSpec strata_from_json(const std::string& text) {
  const json doc = parse_text(text);
  return strata_from_value(doc.is_object() && doc.contains("strata")
                               ? doc.at("strata")
                               : doc);
}

std::string strata_to_json(const StrataSpec& s) {
  return strata_to_value(s).dump(2);
}

SpecDocument parse_spec_document(const std::string& text) {
  const json doc = parse_text(text);
  SpecDocument out;
  if (doc.is_object() && doc.contains("strata")) {
    out.strata = strata_from_value(doc.at("strata"));
    if (doc.contains("config")) {
      const auto& c = doc.at("config");
      if (!c.is_object()) throw parse_error("config block must be a JSON object");
      SimConfig cfg;
      cfg.n = static_cast<std::int64_t>(number_at(c, "n"));
      cfg.reps = static_cast<std::int64_t>(number_or(c, "reps", cfg.reps));
      cfg.alpha = number_or(c, "alpha", cfg.alpha);
      cfg.seed = static_cast<std::uint64_t>(number_or(c, "seed", 1.0));
      out.config = cfg;
    }
  } else {
    out.strata = strata_from_value(doc);
  }
  return out;
}

std::string spec_document_to_json(const SpecDocument& doc) {
  json j;
  j["strata"] = strata_to_value(doc.strata);
  if (doc.config) {
    json c;
    c["n"] = doc.config->n;
    c["reps"] = doc.config->reps;
    c["alpha"] = doc.config->alpha;
    c["seed"] = doc.config->seed;
    j["config"] = c;
  }
  return j.dump(2);
}

}  // namespace latepower
