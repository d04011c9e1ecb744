#include "dbird/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "dbird/error.hpp"

namespace dbird {

namespace {

auto cell_key(const Observation& o) { return std::tie(o.student, o.time, o.item); }

std::string describe(const Observation& o) {
  return "(student " + std::to_string(o.student) + ", time " + std::to_string(o.time) +
         ", item " + std::to_string(o.item) + ")";
}

}  // namespace

ResponseDataset validate_dataset(ResponseDataset raw) {
  if (raw.n_students == 0 || raw.n_times == 0) {
    throw Error(ErrorCode::EmptyDataset, "dataset needs at least one student and one time point");
  }
  for (std::size_t j = 0; j < raw.items.size(); ++j) {
    if (!std::isfinite(raw.items[j])) {
      throw Error(ErrorCode::NonfiniteDifficulty, "item " + std::to_string(j));
    }
  }
  for (const auto& o : raw.observations) {
    if (o.student >= raw.n_students || o.time >= raw.n_times || o.item >= raw.items.size()) {
      throw Error(ErrorCode::IndexOutOfBounds, describe(o));
    }
    if (o.correct != 0 && o.correct != 1) {
      throw Error(ErrorCode::NonBinaryResponse,
                  describe(o) + " has response " + std::to_string(o.correct));
    }
  }
  std::sort(raw.observations.begin(), raw.observations.end(),
            [](const Observation& a, const Observation& b) { return cell_key(a) < cell_key(b); });
  auto dup = std::adjacent_find(
      raw.observations.begin(), raw.observations.end(),
      [](const Observation& a, const Observation& b) { return cell_key(a) == cell_key(b); });
  if (dup != raw.observations.end()) {
    throw Error(ErrorCode::DuplicateObservation, describe(*dup));
  }
  return raw;
}

void require_dynamic(const ResponseDataset& data) {
  if (data.n_times < 2) {
    throw Error(ErrorCode::TooFewTimes,
                "dynamic models require at least 2 time points (T >= 2), got T = " +
                    std::to_string(data.n_times));
  }
}

std::vector<std::vector<std::size_t>> group_by_time(const ResponseDataset& data) {
  std::vector<std::vector<std::size_t>> slices(data.n_times);
  for (std::size_t k = 0; k < data.observations.size(); ++k) {
    slices[data.observations[k].time].push_back(k);
  }
  return slices;
}

CellIndex::CellIndex(const ResponseDataset& data)
    : n_times_(data.n_times), offsets_(data.n_students * data.n_times + 1, 0) {
  for (const auto& o : data.observations) {
    ++offsets_[o.student * n_times_ + o.time + 1];
  }
  for (std::size_t c = 1; c < offsets_.size(); ++c) offsets_[c] += offsets_[c - 1];
}

ModelSpec ModelSpec::from_name(std::string_view name) {
  if (name == "dbird" || name == "d-bird") return dbird();
  if (name == "global-rw") return global_rw();
  if (name == "hetero-rw") return hetero_rw();
  throw Error(ErrorCode::InvalidConfig, "unknown model '" + std::string(name) + "'");
}

std::string_view ModelSpec::name() const noexcept {
  switch (variant_) {
    case Variant::DBird: return "dbird";
    case Variant::GlobalRw: return "global-rw";
    case Variant::HeteroRw: return "hetero-rw";
  }
  return "";
}

std::string_view ModelSpec::label() const noexcept {
  switch (variant_) {
    case Variant::DBird: return "D-BIRD";
    case Variant::GlobalRw: return "Global-RW";
    case Variant::HeteroRw: return "Hetero-RW";
  }
  return "";
}

}  // namespace dbird
