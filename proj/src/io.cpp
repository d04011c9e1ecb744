#include "dbird/io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include <openssl/evp.h>

#include "dbird/error.hpp"
#include "json.hpp"

namespace dbird::io {

namespace {

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

[[noreturn]] void schema_error(const CsvTable& table, std::size_t row, const std::string& msg) {
  throw Error(ErrorCode::Schema, table.where(row) + ": " + msg);
}

}  // namespace

std::optional<std::size_t> CsvTable::find_column(std::string_view col) const {
  auto it = std::find(header.begin(), header.end(), col);
  if (it == header.end()) return std::nullopt;
  return static_cast<std::size_t>(it - header.begin());
}

std::size_t CsvTable::column(std::string_view col) const {
  if (auto c = find_column(col)) return *c;
  throw Error(ErrorCode::Schema, name + ":1: missing column '" + std::string(col) + "'");
}

std::string CsvTable::where(std::size_t r) const {
  return name + ":" + std::to_string(line_numbers.at(r));
}

CsvTable read_csv(const fs::path& path) {
  const std::string text = read_text(path);
  CsvTable table;
  table.name = path.filename().string();
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    pos = end + 1;
    if (line.empty()) continue;
    auto fields = split_fields(line);
    if (table.header.empty()) {
      table.header = std::move(fields);
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw Error(ErrorCode::Schema, table.name + ":" + std::to_string(line_no) + ": expected " +
                                         std::to_string(table.header.size()) + " fields, got " +
                                         std::to_string(fields.size()));
    }
    table.rows.push_back(std::move(fields));
    table.line_numbers.push_back(line_no);
  }
  if (table.header.empty()) throw Error(ErrorCode::Schema, table.name + ":1: missing header");
  return table;
}

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, const CsvTable& table, std::size_t row) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    schema_error(table, row, "not a number: '" + std::string(text) + "'");
  }
  return v;
}

std::size_t parse_index(std::string_view text, const CsvTable& table, std::size_t row) {
  std::size_t v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    schema_error(table, row, "not a non-negative integer: '" + std::string(text) + "'");
  }
  return v;
}

std::optional<long> parse_iso_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int y = 0;
  unsigned m = 0, d = 0;
  auto num = [&](std::size_t from, std::size_t len, auto& out) {
    auto res = std::from_chars(text.data() + from, text.data() + from + len, out);
    return res.ec == std::errc() && res.ptr == text.data() + from + len;
  };
  if (!num(0, 4, y) || !num(5, 2, m) || !num(8, 2, d)) return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                        std::chrono::day{d}};
  if (!ymd.ok()) return std::nullopt;
  return std::chrono::sys_days(ymd).time_since_epoch().count();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorCode::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot rename to " + path.string() + ": " + ec.message());
}

std::string sha256_file(const fs::path& path) {
  const std::string bytes = read_text(path);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::Io, "SHA-256 failed for " + path.string());
  }
  std::ostringstream hex;
  for (unsigned int k = 0; k < len; ++k) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[k]);
  }
  return hex.str();
}

LabeledDataset label_dataset(ResponseDataset data) {
  LabeledDataset out;
  out.student_ids.reserve(data.n_students);
  for (std::size_t i = 0; i < data.n_students; ++i) out.student_ids.push_back("s" + std::to_string(i));
  out.item_ids.reserve(data.n_items());
  for (std::size_t j = 0; j < data.n_items(); ++j) out.item_ids.push_back("q" + std::to_string(j));
  out.data = std::move(data);
  return out;
}

LabeledDataset read_dataset(const fs::path& dir, const ReadOptions& options) {
  LabeledDataset out;
  ResponseDataset& data = out.data;

  const CsvTable items = read_csv(dir / "items.csv");
  const std::size_t c_item = items.column("item_id");
  const std::size_t c_diff = items.column("difficulty");
  std::unordered_map<std::string, std::size_t> item_index;
  for (std::size_t r = 0; r < items.rows.size(); ++r) {
    const std::string& id = items.rows[r][c_item];
    if (!item_index.emplace(id, out.item_ids.size()).second) {
      schema_error(items, r, "duplicate item_id '" + id + "'");
    }
    out.item_ids.push_back(id);
    data.items.difficulties.push_back(parse_double(items.rows[r][c_diff], items, r));
  }

  std::unordered_map<std::string, std::size_t> student_index;
  std::optional<std::size_t> declared_times;
  const fs::path meta_path = dir / "dataset.json";
  if (fs::exists(meta_path)) {
    try {
      const auto meta = nlohmann::json::parse(read_text(meta_path));
      for (const auto& id : meta.at("student_ids")) {
        student_index.emplace(id.get<std::string>(), out.student_ids.size());
        out.student_ids.push_back(id.get<std::string>());
      }
      declared_times = meta.at("n_times").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::Schema, "dataset.json: " + std::string(e.what()));
    }
  }
  const bool students_declared = !out.student_ids.empty();

  const CsvTable responses = read_csv(dir / "responses.csv");
  const std::size_t c_student = responses.column("student_id");
  const std::size_t c_time = responses.column("time");
  const std::size_t c_ritem = responses.column("item_id");
  const std::size_t c_correct = responses.column("correct");
  const std::optional<std::size_t> c_group =
      options.group_column ? std::optional(responses.column(*options.group_column)) : std::nullopt;
  std::vector<std::pair<Observation, std::string>> tagged;

  std::vector<long> raw_times(responses.rows.size());
  for (std::size_t r = 0; r < responses.rows.size(); ++r) {
    const std::string& t = responses.rows[r][c_time];
    if (options.bin_weeks) {
      auto day = parse_iso_date(t);
      if (!day) schema_error(responses, r, "expected an ISO date (YYYY-MM-DD), got '" + t + "'");
      raw_times[r] = *day;
    } else {
      raw_times[r] = static_cast<long>(parse_index(t, responses, r));
    }
  }
  const long origin =
      options.bin_weeks && !raw_times.empty() ? *std::min_element(raw_times.begin(), raw_times.end()) : 0;

  std::size_t max_time = 0;
  for (std::size_t r = 0; r < responses.rows.size(); ++r) {
    const auto& row = responses.rows[r];
    auto [it, inserted] = student_index.emplace(row[c_student], out.student_ids.size());
    if (inserted) {
      if (students_declared) {
        schema_error(responses, r, "student_id '" + row[c_student] + "' not in dataset.json");
      }
      out.student_ids.push_back(row[c_student]);
    }
    auto item = item_index.find(row[c_ritem]);
    if (item == item_index.end()) {
      schema_error(responses, r, "item_id '" + row[c_ritem] + "' not in items.csv");
    }
    int correct = 0;
    if (row[c_correct] == "1") {
      correct = 1;
    } else if (row[c_correct] != "0") {
      schema_error(responses, r, "correct must be 0 or 1, got '" + row[c_correct] + "'");
    }
    const auto time = static_cast<std::size_t>(options.bin_weeks ? (raw_times[r] - origin) / 7
                                                                 : raw_times[r]);
    max_time = std::max(max_time, time);
    tagged.push_back({{it->second, time, item->second, correct},
                      c_group ? row[*c_group] : std::string()});
  }
  std::sort(tagged.begin(), tagged.end(), [](const auto& a, const auto& b) {
    return std::tie(a.first.student, a.first.time, a.first.item) <
           std::tie(b.first.student, b.first.time, b.first.item);
  });
  for (auto& [obs, label] : tagged) {
    data.observations.push_back(obs);
    if (c_group) out.group_labels.push_back(std::move(label));
  }

  data.n_students = out.student_ids.size();
  if (options.n_times) {
    data.n_times = *options.n_times;
  } else if (declared_times) {
    data.n_times = *declared_times;
  } else {
    data.n_times = data.observations.empty() ? 0 : max_time + 1;
  }
  if (!data.observations.empty() && max_time >= data.n_times) {
    throw Error(ErrorCode::Schema, "responses.csv: time index " + std::to_string(max_time) +
                                       " exceeds declared T = " + std::to_string(data.n_times));
  }
  data = validate_dataset(std::move(data));
  return out;
}

std::vector<std::string> write_dataset(const fs::path& dir, const LabeledDataset& dataset) {
  fs::create_directories(dir);
  const ResponseDataset& data = dataset.data;

  std::string responses = "student_id,time,item_id,correct\n";
  for (const auto& o : data.observations) {
    responses += dataset.student_ids[o.student];
    responses += ',';
    responses += std::to_string(o.time);
    responses += ',';
    responses += dataset.item_ids[o.item];
    responses += o.correct ? ",1\n" : ",0\n";
  }
  write_file_atomic(dir / "responses.csv", responses);

  std::string items = "item_id,difficulty\n";
  for (std::size_t j = 0; j < data.n_items(); ++j) {
    items += dataset.item_ids[j] + "," + format_double(data.items[j]) + "\n";
  }
  write_file_atomic(dir / "items.csv", items);

  nlohmann::json meta;
  meta["n_times"] = data.n_times;
  meta["student_ids"] = dataset.student_ids;
  write_file_atomic(dir / "dataset.json", meta.dump(2) + "\n");
  return {"responses.csv", "items.csv", "dataset.json"};
}

}  // namespace dbird::io
