#include "fglm/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "fglm/errors.hpp"

namespace fglm {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& raw) {
  if (raw.find_first_of(",\"\r\n") == std::string::npos) return raw;
  std::string quoted = "\"";
  for (char c : raw) {
    quoted += c;
    if (c == '"') quoted += '"';
  }
  quoted += '"';
  return quoted;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false, field_started = false;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t pos = 0; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (quoted) {
      if (c == '"') {
        if (pos + 1 < text.size() && text[pos + 1] == '"') {
          field += '"';
          ++pos;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      if (field_started && !field.empty())
        throw ParseError("unexpected quote inside unquoted field");
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\r' && pos + 1 < text.size() && text[pos + 1] == '\n') {
      end_record();
      ++pos;
    } else if (c == '\n') {
      end_record();
    } else {
      field += c;
      field_started = true;
    }
  }
  if (quoted) throw ParseError("unterminated quoted field");
  // Final record without a trailing line break.
  if (field_started || !field.empty() || !record.empty()) end_record();
  return records;
}

namespace {

double parse_double(const std::string& s, const std::string& where) {
  double v = 0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end)
    throw ParseError(where + ": '" + s + "' is not a number");
  return v;
}

bool looks_numeric(const std::string& s) {
  if (s.empty()) return false;
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << content;
}

constexpr const char* kEol = "\r\n";

} // namespace

FunctionalSample load_functions(const std::string& path) {
  const auto records = parse_csv(read_file(path));
  if (records.size() < 2) throw ParseError(path + ": needs a header row and data rows");
  const auto& header = records.front();
  if (header.size() < 3 || header[0] != "id")
    throw ParseError(path + ": header must be id,<t1>,...,<tK> with K >= 2");

  const Index k = static_cast<Index>(header.size()) - 1;
  Vector grid(k);
  for (Index m = 0; m < k; ++m)
    grid[m] = parse_double(header[static_cast<std::size_t>(m + 1)], path + ": grid header");
  for (Index m = 0; m + 1 < k; ++m)
    if (!(grid[m] < grid[m + 1]))
      throw GridError(path + ": grid column headers must be strictly increasing");

  const Index n = static_cast<Index>(records.size()) - 1;
  Matrix values(n, k);
  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const auto& row = records[static_cast<std::size_t>(i + 1)];
    if (static_cast<Index>(row.size()) != k + 1)
      throw ParseError(path + ": row " + std::to_string(i + 2) + " has " +
                       std::to_string(row.size()) + " fields, expected " +
                       std::to_string(k + 1));
    ids.push_back(row[0]);
    for (Index m = 0; m < k; ++m)
      values(i, m) = parse_double(row[static_cast<std::size_t>(m + 1)],
                                  path + ": row " + std::to_string(i + 2));
  }
  return FunctionalSample(std::move(grid), std::move(values), std::move(ids));
}

void save_functions(const FunctionalSample& sample, const std::string& path) {
  std::string out = "id";
  for (Index m = 0; m < sample.k(); ++m) out += "," + format_double(sample.grid[m]);
  out += kEol;
  for (Index i = 0; i < sample.n(); ++i) {
    out += csv_field(sample.ids[static_cast<std::size_t>(i)]);
    for (Index m = 0; m < sample.k(); ++m) out += "," + format_double(sample.values(i, m));
    out += kEol;
  }
  write_file(path, out);
}

FactorTable load_factors(const std::string& path) {
  const auto records = parse_csv(read_file(path));
  if (records.size() < 2) throw ParseError(path + ": needs a header row and data rows");
  const auto& header = records.front();
  if (header.size() < 2 || header[0] != "id")
    throw ParseError(path + ": header must be id,<factor1>,...");

  const std::size_t cols = header.size();
  const Index n = static_cast<Index>(records.size()) - 1;
  for (Index i = 0; i < n; ++i)
    if (records[static_cast<std::size_t>(i + 1)].size() != cols)
      throw ParseError(path + ": row " + std::to_string(i + 2) + " has " +
                       std::to_string(records[static_cast<std::size_t>(i + 1)].size()) +
                       " fields, expected " + std::to_string(cols));

  FactorTable table;
  table.ids.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) table.ids.push_back(records[static_cast<std::size_t>(i + 1)][0]);
  {
    std::unordered_map<std::string, Index> seen;
    for (const auto& id : table.ids)
      if (!seen.try_emplace(id, 0).second)
        throw DuplicateIdError(path + ": duplicate id '" + id + "'");
  }

  for (std::size_t c = 1; c < cols; ++c) {
    Index numeric = 0;
    for (Index i = 0; i < n; ++i) {
      const auto& cell = records[static_cast<std::size_t>(i + 1)][c];
      if (cell.empty())
        throw ParseError(path + ": empty value in column '" + header[c] + "', row " +
                         std::to_string(i + 2));
      if (looks_numeric(cell)) ++numeric;
    }
    if (numeric == n) {
      std::vector<double> vals(static_cast<std::size_t>(n));
      for (Index i = 0; i < n; ++i)
        vals[static_cast<std::size_t>(i)] =
            parse_double(records[static_cast<std::size_t>(i + 1)][c], path);
      table.factors.push_back(Factor::continuous(header[c], std::move(vals)));
    } else if (numeric == 0) {
      std::vector<std::string> obs;
      obs.reserve(static_cast<std::size_t>(n));
      for (Index i = 0; i < n; ++i) obs.push_back(records[static_cast<std::size_t>(i + 1)][c]);
      table.factors.push_back(Factor::categorical(header[c], obs));
    } else {
      throw MixedColumnError(path + ": column '" + header[c] + "' mixes " +
                             std::to_string(numeric) + " numeric and " +
                             std::to_string(n - numeric) + " non-numeric entries");
    }
  }
  return table;
}

void save_factors(const FactorTable& table, const std::string& path) {
  std::string out = "id";
  for (const auto& f : table.factors) out += "," + csv_field(f.name);
  out += kEol;
  const Index n = static_cast<Index>(table.ids.size());
  for (const auto& f : table.factors)
    if (f.n() != n) throw ShapeMismatchError("factor '" + f.name + "' does not cover all ids");
  for (Index i = 0; i < n; ++i) {
    out += csv_field(table.ids[static_cast<std::size_t>(i)]);
    for (const auto& f : table.factors) {
      if (f.kind == FactorKind::continuous)
        out += "," + format_double(f.values[static_cast<std::size_t>(i)]);
      else
        out += "," + csv_field(f.levels[static_cast<std::size_t>(
                         f.level_index[static_cast<std::size_t>(i)])]);
    }
    out += kEol;
  }
  write_file(path, out);
}

std::vector<Factor> align_factors(const FunctionalSample& sample, const FactorTable& table) {
  if (static_cast<Index>(table.ids.size()) != sample.n())
    throw IdMismatchError("factor table covers " + std::to_string(table.ids.size()) +
                          " ids, sample has " + std::to_string(sample.n()));
  std::unordered_map<std::string, Index> row_of;
  for (Index i = 0; i < static_cast<Index>(table.ids.size()); ++i)
    row_of[table.ids[static_cast<std::size_t>(i)]] = i;

  IndexVector order;
  order.reserve(static_cast<std::size_t>(sample.n()));
  for (const auto& id : sample.ids) {
    const auto it = row_of.find(id);
    if (it == row_of.end())
      throw IdMismatchError("factor table has no row for id '" + id + "'");
    order.push_back(it->second);
  }

  std::vector<Factor> aligned;
  aligned.reserve(table.factors.size());
  for (const auto& f : table.factors) {
    if (f.kind == FactorKind::continuous) {
      std::vector<double> vals;
      vals.reserve(order.size());
      for (Index r : order) vals.push_back(f.values[static_cast<std::size_t>(r)]);
      aligned.push_back(Factor::continuous(f.name, std::move(vals)));
    } else {
      std::vector<std::string> obs;
      obs.reserve(order.size());
      for (Index r : order)
        obs.push_back(f.levels[static_cast<std::size_t>(
            f.level_index[static_cast<std::size_t>(r)])]);
      aligned.push_back(Factor::categorical(f.name, obs));
    }
  }
  return aligned;
}

std::string p_value_display(double p, Index i_count) {
  const double floor_p = 1.0 / static_cast<double>(i_count);
  if (p <= floor_p * (1.0 + 1e-12)) return "<" + format_double(floor_p);
  return format_double(p);
}

void write_results_csv(const TestOutcome& outcome, const std::string& path) {
  std::string out =
      "statistic,p_value,p_display,rejected,n_perm,exhaustive,alpha,seed,n_exits,exits";
  out += kEol;
  std::string exits;
  for (std::size_t e = 0; e < outcome.exit_labels.size(); ++e) {
    if (e > 0) exits += ";";
    exits += outcome.exit_labels[e];
  }
  out += outcome.statistic;
  out += "," + format_double(outcome.p_value);
  out += "," + csv_field(p_value_display(outcome.p_value, outcome.i_count));
  out += std::string(",") + (outcome.rejected ? "true" : "false");
  out += "," + std::to_string(outcome.i_count);
  out += std::string(",") + (outcome.exhaustive ? "true" : "false");
  out += "," + format_double(outcome.alpha);
  out += "," + std::to_string(outcome.seed);
  out += "," + std::to_string(outcome.exit_labels.size());
  out += "," + csv_field(exits);
  out += kEol;
  write_file(path, out);
}

void write_envelope_csv(const TestVectorMatrix& t, const EnvelopeResult& res,
                        const std::string& path) {
  if (t.panels * t.k != t.l())
    throw ShapeMismatchError("test vector length does not factor into panels x grid");
  std::string out = "label_j,t,low,observed,upp,exit_flag";
  out += kEol;
  for (Index e = 0; e < t.l(); ++e) {
    const double obs = t.rows(0, e);
    const int flag = obs < res.low[e] ? -1 : obs > res.upp[e] ? 1 : 0;
    out += csv_field(t.panel_labels[static_cast<std::size_t>(e / t.k)]);
    out += "," + format_double(t.grid[e % t.k]);
    out += "," + format_double(res.low[e]);
    out += "," + format_double(obs);
    out += "," + format_double(res.upp[e]);
    out += "," + std::to_string(flag);
    out += kEol;
  }
  write_file(path, out);
}

void write_power_csv(const PowerTable& table, const std::string& path) {
  std::string out = "scenario,method,sigma,power,reps,nperm,alpha,seed";
  out += kEol;
  for (const auto& cell : table.cells) {
    out += cell.scenario;
    out += "," + method_name(cell.method);
    out += "," + format_double(cell.sigma);
    out += ",";
    out += cell.applicable ? format_double(cell.power) : "NA";
    out += "," + std::to_string(table.reps);
    out += "," + std::to_string(table.nperm);
    out += "," + format_double(table.alpha);
    out += "," + std::to_string(table.seed);
    out += kEol;
  }
  write_file(path, out);
}

} // namespace fglm
