#include <algorithm>
#include <cstdint>

#include "number_format.hpp"
#include "testrisk/error.hpp"
#include "testrisk/io.hpp"

namespace testrisk::io {
namespace {

std::string row_location(std::size_t row) {
  return "row " + std::to_string(row);
}

void expect_header(const std::vector<CsvRow>& rows, const CsvRow& header) {
  if (rows.empty() || rows.front() != header) {
    std::string expected;
    for (const auto& h : header) expected += (expected.empty() ? "" : ",") + h;
    throw Error(ErrorCode::kParseError,
                "expected header \"" + expected + "\"", row_location(1));
  }
}

bool blank(const CsvRow& row) {
  return row.size() == 1 && row.front().empty();
}

}  // namespace

std::vector<CsvRow> parse_csv(std::string_view text) {
  std::vector<CsvRow> rows;
  CsvRow row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t line = 1;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started) {
          throw Error(ErrorCode::kParseError,
                      "quote inside an unquoted field", row_location(line));
        }
        quoted = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        [[fallthrough]];
      case '\n':
        end_row();
        ++line;
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (quoted) {
    throw Error(ErrorCode::kParseError, "unterminated quoted field",
                row_location(line));
  }
  if (field_started || !row.empty()) end_row();
  return rows;
}

std::string csv_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<ReleaseHistory> load_history_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  expect_header(rows, {"release", "phase", "order", "defects"});
  std::vector<ReleaseHistory> histories;

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = row_location(r + 1);
    if (blank(row)) continue;
    if (row.size() != 4) {
      throw Error(ErrorCode::kParseError,
                  "expected 4 fields, got " + std::to_string(row.size()),
                  where);
    }
    auto order = detail::parse_integer(row[2]);
    auto defects = detail::parse_integer(row[3]);
    if (!order || *order < INT32_MIN || *order > INT32_MAX) {
      throw Error(ErrorCode::kParseError, "order must be an integer", where);
    }
    if (!defects) {
      throw Error(ErrorCode::kParseError, "defects must be an integer", where);
    }
    if (*defects < 0) {
      throw Error(ErrorCode::kNegativeCount, "defects must be >= 0", where);
    }
    if (row[0].empty() || row[1].empty()) {
      throw Error(ErrorCode::kParseError, "release and phase are required",
                  where);
    }
    auto history = std::find_if(
        histories.begin(), histories.end(),
        [&](const ReleaseHistory& h) { return h.release_name == row[0]; });
    if (history == histories.end()) {
      histories.push_back({row[0], std::nullopt, {}});
      history = std::prev(histories.end());
    }
    const bool duplicate = std::any_of(
        history->phases.begin(), history->phases.end(),
        [&](const PhaseRecord& p) { return p.order == *order; });
    if (duplicate) {
      throw Error(ErrorCode::kDuplicate,
                  "order " + row[2] + " repeated for release " + row[0],
                  where);
    }
    history->phases.push_back({row[1], static_cast<int>(*order), *defects});
  }
  for (auto& h : histories) validate(h);
  return histories;
}

std::map<std::string, SizeEstimate> load_sizes_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  expect_header(rows, {"release", "loc", "loc_per_fp"});
  std::map<std::string, SizeEstimate> sizes;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = row_location(r + 1);
    if (blank(row)) continue;
    if (row.size() != 3) {
      throw Error(ErrorCode::kParseError,
                  "expected 3 fields, got " + std::to_string(row.size()),
                  where);
    }
    auto loc = detail::parse_number(row[1]);
    auto gearing = detail::parse_number(row[2]);
    if (!loc || !gearing) {
      throw Error(ErrorCode::kParseError, "loc and loc_per_fp must be numbers",
                  where);
    }
    SizeEstimate size{*loc, *gearing, 1.0};
    try {
      validate(size);
    } catch (const Error& e) {
      throw Error(e.code(), e.what(), where);
    }
    if (!sizes.emplace(row[0], size).second) {
      throw Error(ErrorCode::kDuplicate, "release " + row[0] + " repeated",
                  where);
    }
  }
  return sizes;
}

void attach_sizes(std::vector<ReleaseHistory>& histories,
                  const std::map<std::string, SizeEstimate>& sizes) {
  for (auto& h : histories) {
    if (auto it = sizes.find(h.release_name); it != sizes.end()) {
      h.size = it->second;
    }
  }
}

}  // namespace testrisk::io
