#pragma once

// Fixed-format MPS writer and reader for LpInstance.
//
// The writer is deterministic: columns in index order, one coefficient per
// line, objective entry first. A column without any nonzero gets an explicit
// zero objective entry so that the reader sees it. The reader accepts what
// the writer emits plus the usual whitespace-separated variants (integer
// data only).

#include <flowsat/lp_model.hpp>

#include <cstdint>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace flowsat {

namespace detail {

inline std::string field8(const std::string& s) {
  return s.size() >= 8 ? s : s + std::string(8 - s.size(), ' ');
}

inline std::string row_label(const LpInstance& lp, std::size_t r) {
  return r < lp.row_names.size() && !lp.row_names[r].empty() ? lp.row_names[r]
                                                              : "R" + std::to_string(r);
}

inline std::string col_label(const LpInstance& lp, std::size_t c) {
  return c < lp.col_names.size() && !lp.col_names[c].empty() ? lp.col_names[c]
                                                              : "C" + std::to_string(c);
}

}  // namespace detail

inline std::string export_mps(const LpInstance& lp) {
  using detail::field8;
  std::ostringstream out;
  out << "NAME          " << (lp.name.empty() ? "FLOWSAT" : lp.name) << "\n";
  out << "OBJSENSE\n    MAX\n";
  out << "ROWS\n N  OBJ\n";
  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    out << " E  " << detail::row_label(lp, r) << "\n";
  }

  // column-major view of the rows
  std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> cols(lp.num_vars);
  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    for (const auto& e : lp.rows[r].entries) {
      if (e.coef != 0) {
        cols[e.col].emplace_back(r, e.coef);
      }
    }
  }

  out << "COLUMNS\n";
  for (std::size_t c = 0; c < lp.num_vars; ++c) {
    const std::string name = field8(detail::col_label(lp, c));
    if (lp.objective[c] != 0 || cols[c].empty()) {
      out << "    " << name << "  " << field8("OBJ") << "  " << lp.objective[c] << "\n";
    }
    for (const auto& [r, v] : cols[c]) {
      out << "    " << name << "  " << field8(detail::row_label(lp, r)) << "  " << v << "\n";
    }
  }

  out << "RHS\n";
  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    if (lp.rows[r].rhs != 0) {
      out << "    " << field8("RHS") << "  " << field8(detail::row_label(lp, r)) << "  "
          << lp.rows[r].rhs << "\n";
    }
  }

  out << "BOUNDS\n";
  for (std::size_t c = 0; c < lp.num_vars; ++c) {
    const std::string name = field8(detail::col_label(lp, c));
    const auto& up = lp.upper[c];
    if (up && *up == lp.lower[c]) {
      out << " FX " << field8("BND") << "  " << name << "  " << *up << "\n";
      continue;
    }
    if (lp.lower[c] != 0) {
      out << " LO " << field8("BND") << "  " << name << "  " << lp.lower[c] << "\n";
    }
    if (up) {
      out << " UP " << field8("BND") << "  " << name << "  " << *up << "\n";
    }
  }
  out << "ENDATA\n";
  return out.str();
}

inline LpInstance import_mps(std::istream& in) {
  enum class Section { None, Name, ObjSense, Rows, Columns, Rhs, Bounds, End };
  Section section = Section::None;
  LpInstance lp;
  std::string objective_row;
  bool maximize = false;
  std::map<std::string, std::size_t> row_index;
  std::map<std::string, std::size_t> col_index;
  std::vector<std::vector<RowEntry>> entries;
  std::string line;
  std::size_t line_no = 0;

  auto fail = [&](const std::string& what) -> void {
    throw std::runtime_error("MPS line " + std::to_string(line_no) + ": " + what);
  };
  auto parse_int = [&](const std::string& tok) -> std::int64_t {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      fail("bad number \"" + tok + "\"");
    }
    if (used != tok.size() || v != static_cast<double>(static_cast<std::int64_t>(v))) {
      fail("non-integer value \"" + tok + "\"");
    }
    return static_cast<std::int64_t>(v);
  };
  auto column = [&](const std::string& name) {
    auto it = col_index.find(name);
    if (it != col_index.end()) {
      return it->second;
    }
    const std::size_t c = lp.num_vars++;
    col_index.emplace(name, c);
    lp.col_names.push_back(name);
    lp.lower.push_back(0);
    lp.upper.push_back(std::nullopt);
    lp.objective.push_back(0);
    return c;
  };
  auto add_coef = [&](std::size_t c, const std::string& row, std::int64_t v) {
    if (row == objective_row) {
      lp.objective[c] = v;
      return;
    }
    auto it = row_index.find(row);
    if (it == row_index.end()) {
      fail("unknown row \"" + row + "\"");
    }
    if (v != 0) {
      entries[it->second].push_back({c, v});
    }
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty() || line[0] == '*') {
      continue;
    }
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) {
      tok.push_back(t);
    }
    if (tok.empty()) {
      continue;
    }
    if (line[0] != ' ' && line[0] != '\t') {
      const std::string& head = tok[0];
      if (head == "NAME") {
        lp.name = tok.size() > 1 ? tok[1] : "";
        section = Section::Name;
      } else if (head == "OBJSENSE") {
        section = Section::ObjSense;
        if (tok.size() > 1) {
          maximize = tok[1] == "MAX" || tok[1] == "MAXIMIZE";
        }
      } else if (head == "ROWS") {
        section = Section::Rows;
      } else if (head == "COLUMNS") {
        section = Section::Columns;
      } else if (head == "RHS") {
        section = Section::Rhs;
      } else if (head == "BOUNDS") {
        section = Section::Bounds;
      } else if (head == "ENDATA") {
        section = Section::End;
        break;
      } else {
        fail("unsupported section \"" + head + "\"");
      }
      continue;
    }
    switch (section) {
      case Section::ObjSense:
        maximize = tok[0] == "MAX" || tok[0] == "MAXIMIZE";
        break;
      case Section::Rows:
        if (tok.size() != 2) {
          fail("ROWS entry needs type and name");
        }
        if (tok[0] == "N") {
          if (objective_row.empty()) {
            objective_row = tok[1];
          }
        } else if (tok[0] == "E") {
          row_index.emplace(tok[1], lp.rows.size());
          lp.rows.emplace_back();
          lp.row_names.push_back(tok[1]);
          entries.emplace_back();
        } else {
          fail("only equality rows are supported");
        }
        break;
      case Section::Columns: {
        if (tok.size() != 3 && tok.size() != 5) {
          fail("COLUMNS entry needs 3 or 5 fields");
        }
        const std::size_t c = column(tok[0]);
        add_coef(c, tok[1], parse_int(tok[2]));
        if (tok.size() == 5) {
          add_coef(c, tok[3], parse_int(tok[4]));
        }
        break;
      }
      case Section::Rhs:
        for (std::size_t t = 1; t + 1 < tok.size(); t += 2) {
          if (tok[t] == objective_row) {
            continue;
          }
          auto it = row_index.find(tok[t]);
          if (it == row_index.end()) {
            fail("unknown row \"" + tok[t] + "\"");
          }
          lp.rows[it->second].rhs = parse_int(tok[t + 1]);
        }
        break;
      case Section::Bounds: {
        if (tok.size() < 3) {
          fail("BOUNDS entry too short");
        }
        auto it = col_index.find(tok[2]);
        if (it == col_index.end()) {
          fail("bound on unknown column \"" + tok[2] + "\"");
        }
        const std::size_t c = it->second;
        const std::string& type = tok[0];
        if (type == "PL") {
          lp.upper[c].reset();
        } else if (tok.size() < 4) {
          fail("bound needs a value");
        } else if (type == "UP") {
          lp.upper[c] = parse_int(tok[3]);
        } else if (type == "LO") {
          lp.lower[c] = parse_int(tok[3]);
        } else if (type == "FX") {
          lp.lower[c] = parse_int(tok[3]);
          lp.upper[c] = lp.lower[c];
        } else {
          fail("unsupported bound type \"" + type + "\"");
        }
        break;
      }
      default:
        fail("data outside a section");
    }
  }
  if (section != Section::End) {
    throw std::runtime_error("MPS: missing ENDATA");
  }
  if (!maximize) {
    for (auto& c : lp.objective) {
      c = -c;
    }
  }
  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    lp.rows[r].entries = std::move(entries[r]);
  }
  return lp;
}

inline LpInstance import_mps(const std::string& text) {
  std::istringstream in(text);
  return import_mps(in);
}

}  // namespace flowsat
