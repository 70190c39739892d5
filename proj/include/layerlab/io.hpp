#pragma once

// File formats: JSON media (profile or reflectivity form), delta trains and
// spectra as CSV or JSON. Files are written atomically.

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "layerlab/errors.hpp"
#include "layerlab/forward.hpp"
#include "layerlab/media.hpp"
#include "layerlab/rational.hpp"

namespace layerlab {

struct LoadedMedium {
  MediumParams params;
  std::optional<ImpedanceProfile> profile;
  // Some depth or travel time was given as a JSON number with a fractional
  // part and was converted from its binary value.
  bool inexact_times = false;
};

/// %.17g
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline cdouble parse_complex(const nlohmann::json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw parse_error("field '" + field + "' entries must be [re, im] number pairs");
  return {v[0].get<double>(), v[1].get<double>()};
}

inline std::vector<cdouble> parse_complex_list(const nlohmann::json& doc, const std::string& field) {
  const auto& arr = doc.at(field);
  if (!arr.is_array()) throw parse_error("field '" + field + "' must be an array");
  std::vector<cdouble> out;
  for (const auto& v : arr) out.push_back(parse_complex(v, field));
  return out;
}

inline std::vector<Rational> parse_rational_list(const nlohmann::json& doc, const std::string& field, bool& inexact) {
  const auto& arr = doc.at(field);
  if (!arr.is_array()) throw parse_error("field '" + field + "' must be an array");
  std::vector<Rational> out;
  for (const auto& v : arr) {
    if (v.is_string()) {
      out.push_back(parse_rational(v.get<std::string>()));
    } else if (v.is_number_integer()) {
      out.emplace_back(v.get<long long>());
    } else if (v.is_number_float()) {
      inexact = true;
      out.push_back(rational_from_double(v.get<double>()));
    } else {
      throw parse_error("field '" + field + "' entries must be rational strings or numbers");
    }
  }
  return out;
}

}  // namespace detail

/// Accepts {"C": [[re,im],...], "X": [...]} or {"w": [[re,im],...], "tau": [...]}.
inline LoadedMedium parse_medium(const nlohmann::json& doc, bool renormalize_profile = false) {
  if (!doc.is_object()) throw parse_error("medium document must be a JSON object");
  const bool has_profile = doc.contains("C") || doc.contains("X");
  const bool has_params = doc.contains("w") || doc.contains("tau");
  if (has_profile == has_params) throw parse_error("medium needs exactly one of {C, X} or {w, tau}");
  for (const auto& [key, value] : doc.items()) {
    const bool known = has_profile ? (key == "C" || key == "X") : (key == "w" || key == "tau");
    if (!known) throw parse_error("unknown field '" + key + "'");
  }
  LoadedMedium out;
  try {
    if (has_profile) {
      auto C = detail::parse_complex_list(doc, "C");
      auto X = detail::parse_rational_list(doc, "X", out.inexact_times);
      if (renormalize_profile) C = renormalize(std::move(C));
      out.profile = validate_profile(std::move(C), std::move(X));
      out.params = profile_to_params(*out.profile);
    } else {
      auto w = detail::parse_complex_list(doc, "w");
      auto tau = detail::parse_rational_list(doc, "tau", out.inexact_times);
      out.params = validate_params(std::move(w), std::move(tau));
    }
  } catch (const nlohmann::json::out_of_range& e) {
    throw parse_error(std::string("missing field: ") + e.what());
  }
  return out;
}

inline LoadedMedium parse_medium_text(const std::string& text, bool renormalize_profile = false) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(std::string("malformed JSON: ") + e.what());
  }
  return parse_medium(doc, renormalize_profile);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw io_error("error reading '" + path + "'");
  return ss.str();
}

inline LoadedMedium load_medium(const std::string& path, bool renormalize_profile = false) {
  return parse_medium_text(read_file(path), renormalize_profile);
}

inline nlohmann::json medium_to_json(const MediumParams& params) {
  nlohmann::json doc;
  doc["w"] = nlohmann::json::array();
  doc["tau"] = nlohmann::json::array();
  for (const auto& w : params.w) doc["w"].push_back({w.real(), w.imag()});
  for (const auto& t : params.tau) doc["tau"].push_back(to_string(t));
  return doc;
}

/// Writes to a sibling temporary file and renames it over `path`.
inline void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw io_error("error writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw io_error("cannot rename onto '" + path + "'");
  }
}

inline bool wants_json(const std::string& path) {
  return std::filesystem::path(path).extension() == ".json";
}

inline std::string train_to_csv(const DeltaTrain<double>& train) {
  std::string out = "t_num,t_den,re,im\n";
  for (const auto& a : train.arrivals)
    out += num(a.t).str() + "," + den(a.t).str() + "," + format_double(a.a.real()) + "," + format_double(a.a.imag()) +
           "\n";
  return out;
}

inline nlohmann::json train_to_json(const DeltaTrain<double>& train) {
  nlohmann::json doc;
  doc["horizon"] = to_string(train.horizon);
  doc["arrivals"] = nlohmann::json::array();
  for (const auto& a : train.arrivals) doc["arrivals"].push_back({{"t", to_string(a.t)}, {"a", {a.a.real(), a.a.imag()}}});
  return doc;
}

inline DeltaTrain<double> train_from_json(const nlohmann::json& doc) {
  DeltaTrain<double> train;
  try {
    train.horizon = parse_rational(doc.at("horizon").get<std::string>());
    for (const auto& a : doc.at("arrivals"))
      train.arrivals.push_back({parse_rational(a.at("t").get<std::string>()), detail::parse_complex(a.at("a"), "a")});
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("malformed delta train: ") + e.what());
  }
  return train;
}

/// Rows of a CSV table whose first line is `header`.
inline std::string table_to_csv(const std::string& header, const std::vector<std::vector<double>>& rows) {
  std::string out = header + "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

inline std::string spectrum_to_csv(const SpectrumTrace<double>& s) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < s.sigma.size(); ++i) rows.push_back({s.sigma[i], s.values[i].real(), s.values[i].imag()});
  return table_to_csv("sigma,re,im", rows);
}

inline nlohmann::json spectrum_to_json(const SpectrumTrace<double>& s) {
  nlohmann::json doc;
  doc["sigma"] = s.sigma;
  doc["values"] = nlohmann::json::array();
  for (const auto& v : s.values) doc["values"].push_back({v.real(), v.imag()});
  return doc;
}

inline void write_train(const std::string& path, const DeltaTrain<double>& train) {
  atomic_write(path, wants_json(path) ? train_to_json(train).dump(2) + "\n" : train_to_csv(train));
}

inline void write_spectrum(const std::string& path, const SpectrumTrace<double>& s) {
  atomic_write(path, wants_json(path) ? spectrum_to_json(s).dump(2) + "\n" : spectrum_to_csv(s));
}

}  // namespace layerlab
