// Annotation file format: UTF-8 CSV with header "start_s,end_s,class",
// decimal seconds, class names in lower snake case. Unlabeled spans are
// implicitly background, so files list events only.
#pragma once

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "coughdet/types.hpp"

namespace coughdet {

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

}  // namespace detail

// Parses an annotation CSV. Row numbers in errors are 1-based over data rows
// (the header does not count). An empty file or a lone header yields zero
// events. `duration_s` < 0 skips the recording-length check.
inline std::vector<LabeledEvent> parse_annotations(std::istream& in, const std::string& name,
                                                   double duration_s = -1.0) {
  std::vector<LabeledEvent> events;
  std::vector<int> rows;
  std::string line;
  int data_row = 0;
  bool saw_header = false;
  std::string bad;
  auto complain = [&](int row, const std::string& why) {
    if (!bad.empty()) bad += "; ";
    bad += "row " + std::to_string(row) + ": " + why;
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string t = detail::trim(line);
    if (t.empty()) continue;
    if (!saw_header) {
      auto cells = detail::split_csv_row(t);
      if (cells.size() == 3 && cells[0] == "start_s" && cells[1] == "end_s" && cells[2] == "class") {
        saw_header = true;
        continue;
      }
      throw ValidationError(name + ": missing 'start_s,end_s,class' header");
    }
    ++data_row;
    auto cells = detail::split_csv_row(t);
    if (cells.size() != 3) {
      complain(data_row, "expected 3 columns, got " + std::to_string(cells.size()));
      continue;
    }
    LabeledEvent e;
    try {
      std::size_t pos = 0;
      e.start_s = std::stod(cells[0], &pos);
      if (pos != cells[0].size()) throw std::invalid_argument("");
      e.end_s = std::stod(cells[1], &pos);
      if (pos != cells[1].size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      complain(data_row, "unparseable time value");
      continue;
    }
    try {
      e.cls = event_class_from_string(cells[2]);
    } catch (const ValidationError&) {
      complain(data_row, "unknown class '" + cells[2] + "'");
      continue;
    }
    if (!(e.start_s >= 0.0 && e.start_s < e.end_s)) {
      complain(data_row, "requires 0 <= start_s < end_s");
      continue;
    }
    if (duration_s >= 0.0 && e.end_s > duration_s + 1e-9) {
      complain(data_row, "end_s exceeds recording duration");
      continue;
    }
    events.push_back(e);
    rows.push_back(data_row);
  }
  // Overlap check on the sorted view, reported with original row numbers.
  std::vector<std::size_t> order(events.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return events[a].start_s < events[b].start_s; });
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    const auto& a = events[order[i]];
    const auto& b = events[order[i + 1]];
    if (b.start_s < a.end_s - 1e-9)
      complain(rows[order[i]], "overlaps row " + std::to_string(rows[order[i + 1]]));
  }
  if (!bad.empty()) throw ValidationError(name + ": " + bad);
  std::vector<LabeledEvent> sorted;
  sorted.reserve(events.size());
  for (std::size_t i : order) sorted.push_back(events[i]);
  return sorted;
}

inline std::vector<LabeledEvent> load_annotations(const std::string& path, double duration_s = -1.0) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open annotation file: " + path);
  return parse_annotations(in, path, duration_s);
}

inline void write_annotations(std::ostream& out, const std::vector<LabeledEvent>& events) {
  out << "start_s,end_s,class\n";
  char buf[128];
  for (const auto& e : events) {
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%s\n", e.start_s, e.end_s, to_string(e.cls));
    out << buf;
  }
}

inline void write_annotations(const std::string& path, const std::vector<LabeledEvent>& events) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write annotation file: " + path);
  write_annotations(out, events);
}

}  // namespace coughdet
