#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace dbird {

/// One binary response Y[student, time, item]. Time is 0-based.
struct Observation {
  std::size_t student = 0;
  std::size_t time = 0;
  std::size_t item = 0;
  int correct = 0;

  friend bool operator==(const Observation&, const Observation&) = default;
};

/// Known item difficulties in logits, indexed by item.
struct ItemBank {
  std::vector<double> difficulties;

  std::size_t size() const noexcept { return difficulties.size(); }
  double operator[](std::size_t item) const { return difficulties[item]; }

  friend bool operator==(const ItemBank&, const ItemBank&) = default;
};

/// Sparse longitudinal response data. Any (student, time) cell may be empty.
struct ResponseDataset {
  std::size_t n_students = 0;
  std::size_t n_times = 0;
  std::vector<Observation> observations;
  ItemBank items;

  std::size_t n_items() const noexcept { return items.size(); }

  friend bool operator==(const ResponseDataset&, const ResponseDataset&) = default;
};

/// Checks every invariant and returns a copy with observations sorted by
/// (student, time, item). Throws dbird::Error on violation.
ResponseDataset validate_dataset(ResponseDataset raw);

/// Throws TooFewTimes unless the dataset has at least two time points.
void require_dynamic(const ResponseDataset& data);

/// Observation indices per time point; a partition of all observations.
std::vector<std::vector<std::size_t>> group_by_time(const ResponseDataset& data);

/// CSR index over (student, time) cells of a validated dataset. Observations
/// of cell (i, t) occupy [offsets[i*T + t], offsets[i*T + t + 1]).
class CellIndex {
 public:
  explicit CellIndex(const ResponseDataset& data);

  std::size_t cell_begin(std::size_t student, std::size_t time) const {
    return offsets_[student * n_times_ + time];
  }
  std::size_t cell_end(std::size_t student, std::size_t time) const {
    return offsets_[student * n_times_ + time + 1];
  }
  std::size_t student_begin(std::size_t student) const { return offsets_[student * n_times_]; }
  std::size_t student_end(std::size_t student) const { return offsets_[(student + 1) * n_times_]; }

 private:
  std::size_t n_times_;
  std::vector<std::size_t> offsets_;
};

enum class Variant { DBird, GlobalRw, HeteroRw };
enum class InnovationSharing { Shared, PerStudent };

/// Model variant. The cohort flag and variance sharing follow from the variant.
class ModelSpec {
 public:
  constexpr ModelSpec() = default;
  constexpr explicit ModelSpec(Variant variant) : variant_(variant) {}

  static constexpr ModelSpec dbird() { return ModelSpec(Variant::DBird); }
  static constexpr ModelSpec global_rw() { return ModelSpec(Variant::GlobalRw); }
  static constexpr ModelSpec hetero_rw() { return ModelSpec(Variant::HeteroRw); }

  /// Parses "dbird", "global-rw" or "hetero-rw".
  static ModelSpec from_name(std::string_view name);

  constexpr Variant variant() const noexcept { return variant_; }
  constexpr bool include_cohort() const noexcept { return variant_ == Variant::DBird; }
  constexpr InnovationSharing innovation_sharing() const noexcept {
    return variant_ == Variant::GlobalRw ? InnovationSharing::Shared
                                         : InnovationSharing::PerStudent;
  }
  std::string_view name() const noexcept;
  /// Display name as used in result tables.
  std::string_view label() const noexcept;

  friend constexpr bool operator==(ModelSpec, ModelSpec) = default;

 private:
  Variant variant_ = Variant::DBird;
};

}  // namespace dbird
