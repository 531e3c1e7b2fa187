#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "genmod/types.hpp"

namespace genmod {

/// Input samples and QoI values for one experiment, plus the provenance
/// needed to regenerate it.
struct Dataset {
  Matrix samples;  // N x d, entries in [-1, 1]
  Vector qoi;      // length N
  std::uint64_t seed = 0;
  double noise_amplitude = 0.0;

  // Generator provenance for the metadata sidecar. Fields that do not apply
  // to a given generator stay at their defaults.
  std::string generator = "unknown";
  double correlation_length = 0.0;
  double a_bar = 0.0;
  double sigma = 0.0;
  int element_count = 0;

  int size() const { return static_cast<int>(samples.rows()); }
  int dim() const { return static_cast<int>(samples.cols()); }
};

inline constexpr const char* kGeneratorVersion = "1";

/// CSV with header y_1,...,y_d,u and 17-significant-digit values, so doubles
/// round-trip exactly.
void write_dataset_csv(const Dataset& ds, std::ostream& out);
void write_dataset_csv(const Dataset& ds, const std::string& path);

Dataset read_dataset_csv(std::istream& in);
Dataset read_dataset_csv(const std::string& path);

/// Metadata sidecar: {d, L, a_bar, sigma, element_count, seed,
/// generator_version} plus the generator name and noise amplitude.
std::string dataset_metadata_json(const Dataset& ds);
void write_dataset_metadata(const Dataset& ds, const std::string& path);
/// Merges sidecar metadata (seed, generator parameters) into a dataset that
/// was read back from CSV.
void apply_dataset_metadata(Dataset& ds, const std::string& json_text);

}  // namespace genmod
