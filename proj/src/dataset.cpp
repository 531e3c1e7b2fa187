#include "genmod/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

namespace genmod {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_dataset_csv(const Dataset& ds, std::ostream& out) {
  const int d = ds.dim();
  for (int j = 1; j <= d; ++j) out << "y_" << j << ",";
  out << "u\n";
  for (int i = 0; i < ds.size(); ++i) {
    for (int j = 0; j < d; ++j) out << format_double(ds.samples(i, j)) << ",";
    out << format_double(ds.qoi[i]) << "\n";
  }
}

void write_dataset_csv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_dataset_csv(ds, out);
}

Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("dataset CSV: empty file");
  int d = 0;
  {
    std::stringstream header(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(header, field, ',')) fields.push_back(field);
    if (fields.empty() || fields.back() != "u")
      throw std::runtime_error("dataset CSV: header must end with 'u'");
    d = static_cast<int>(fields.size()) - 1;
    for (int j = 0; j < d; ++j)
      if (fields[j] != "y_" + std::to_string(j + 1))
        throw std::runtime_error("dataset CSV: unexpected header column '" + fields[j] + "'");
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<double> row;
    while (std::getline(ss, field, ',')) row.push_back(std::stod(field));
    if (static_cast<int>(row.size()) != d + 1)
      throw std::runtime_error("dataset CSV: row " + std::to_string(rows.size() + 1) +
                               " has " + std::to_string(row.size()) + " fields, expected " +
                               std::to_string(d + 1));
    rows.push_back(std::move(row));
  }
  Dataset ds;
  ds.samples.resize(rows.size(), d);
  ds.qoi.resize(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < d; ++j) ds.samples(static_cast<int>(i), j) = rows[i][j];
    ds.qoi[static_cast<int>(i)] = rows[i][d];
  }
  return ds;
}

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_dataset_csv(in);
}

std::string dataset_metadata_json(const Dataset& ds) {
  nlohmann::json j;
  j["d"] = ds.dim();
  j["L"] = ds.correlation_length;
  j["a_bar"] = ds.a_bar;
  j["sigma"] = ds.sigma;
  j["element_count"] = ds.element_count;
  j["seed"] = ds.seed;
  j["generator_version"] = kGeneratorVersion;
  j["generator"] = ds.generator;
  j["noise_amplitude"] = ds.noise_amplitude;
  return j.dump(2);
}

void write_dataset_metadata(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << dataset_metadata_json(ds) << "\n";
}

void apply_dataset_metadata(Dataset& ds, const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  if (j.contains("d") && j["d"].get<int>() != ds.dim())
    throw std::runtime_error("dataset metadata: dimension mismatch with CSV");
  if (j.contains("seed")) ds.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("L")) ds.correlation_length = j["L"].get<double>();
  if (j.contains("a_bar")) ds.a_bar = j["a_bar"].get<double>();
  if (j.contains("sigma")) ds.sigma = j["sigma"].get<double>();
  if (j.contains("element_count")) ds.element_count = j["element_count"].get<int>();
  if (j.contains("generator")) ds.generator = j["generator"].get<std::string>();
  if (j.contains("noise_amplitude")) ds.noise_amplitude = j["noise_amplitude"].get<double>();
}

}  // namespace genmod
