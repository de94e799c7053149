#include "tmd/params.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tmd/format.hpp"

namespace tmd {

namespace {

struct Token {
  std::string text;
  int line;
};

// Strips '#' comments and splits on whitespace, remembering line numbers.
std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  int line = 1;
  std::string cur;
  int cur_line = 0;
  bool in_comment = false;
  auto flush = [&] {
    if (!cur.empty()) {
      tokens.push_back({cur, cur_line});
      cur.clear();
    }
  };
  for (char ch : text) {
    if (ch == '\n') {
      flush();
      in_comment = false;
      ++line;
      continue;
    }
    if (in_comment) continue;
    if (ch == '#') {
      flush();
      in_comment = true;
      continue;
    }
    if (ch == ' ' || ch == '\t' || ch == '\r') {
      flush();
      continue;
    }
    if (cur.empty()) cur_line = line;
    cur.push_back(ch);
  }
  flush();
  return tokens;
}

double parse_number(const Token& tok, std::string_view source, std::string_view field) {
  const char* first = tok.text.data();
  const char* last = first + tok.text.size();
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw ParseError(std::string(source) + ":" + std::to_string(tok.line) +
                     ": expected a number for field '" + std::string(field) +
                     "', got '" + tok.text + "'");
  return value;
}

const char* kFieldNames[14] = {"m", "gamma", "lambda3", "c", "d", "h", "eta",
                               "beta", "lambda2", "B", "R", "D", "lambda1", "A"};

}  // namespace

void TersoffEntry::validate(const std::string& where) const {
  auto fail = [&](const std::string& msg) {
    throw ParseError("entry " + where + ": " + msg);
  };
  const double fields[14] = {double(m), gamma, lambda3, c, d, h, eta, beta,
                             lambda2, big_b, big_r, big_d, lambda1, big_a};
  for (int f = 0; f < 14; ++f)
    if (!std::isfinite(fields[f]))
      fail(std::string("field '") + kFieldNames[f] + "' is not finite");
  if (m != 1 && m != 3) fail("field 'm' must be 1 or 3");
  if (!(big_d > 0.0)) fail("field 'D' must be positive");
  if (!(big_r > big_d)) fail("field 'R' must exceed D");
  if (!(eta > 0.0)) fail("field 'eta' must be positive");
  if (beta < 0.0) fail("field 'beta' must be non-negative");
  if (d == 0.0) fail("field 'd' must be nonzero");
  if (big_a < 0.0) fail("field 'A' must be non-negative");
  if (big_b < 0.0) fail("field 'B' must be non-negative");
  if (gamma < 0.0) fail("field 'gamma' must be non-negative");
}

ParamTable::ParamTable(std::vector<std::string> species,
                       std::vector<TersoffEntry> entries)
    : species_(std::move(species)), entries_(std::move(entries)) {
  const std::size_t s = species_.size();
  if (s == 0) throw ParseError("parameter table has no species");
  if (entries_.size() != s * s * s)
    throw ParseError("parameter table needs " + std::to_string(s * s * s) +
                     " entries for " + std::to_string(s) + " species, got " +
                     std::to_string(entries_.size()));
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j)
      for (std::size_t k = 0; k < s; ++k)
        entries_[(i * s + j) * s + k].validate(species_[i] + " " + species_[j] +
                                               " " + species_[k]);
  r_cut_max_ = 0.0;
  for (const TersoffEntry& e : entries_)
    r_cut_max_ = std::max(r_cut_max_, e.cutoff());
}

int ParamTable::species_id(std::string_view name) const {
  for (std::size_t i = 0; i < species_.size(); ++i)
    if (species_[i] == name) return int(i);
  return -1;
}

ParamTable parse_param_text(std::string_view text, std::string_view source_name) {
  const std::vector<Token> tokens = tokenize(text);
  if (tokens.empty())
    throw ParseError(std::string(source_name) + ": no entries found");
  if (tokens.size() % 17 != 0)
    throw ParseError(std::string(source_name) + ":" +
                     std::to_string(tokens.back().line) +
                     ": truncated entry (each entry needs 3 names and 14 numbers)");

  std::vector<std::string> species;
  auto intern = [&](const std::string& name) {
    for (std::size_t i = 0; i < species.size(); ++i)
      if (species[i] == name) return int(i);
    species.push_back(name);
    return int(species.size() - 1);
  };

  struct RawEntry {
    int si, sj, sk;
    TersoffEntry e;
    int line;
  };
  std::vector<RawEntry> raw;
  for (std::size_t t = 0; t < tokens.size(); t += 17) {
    RawEntry r;
    r.line = tokens[t].line;
    r.si = intern(tokens[t].text);
    r.sj = intern(tokens[t + 1].text);
    r.sk = intern(tokens[t + 2].text);
    double num[14];
    for (int f = 0; f < 14; ++f)
      num[f] = parse_number(tokens[t + 3 + f], source_name, kFieldNames[f]);
    if (num[0] != std::floor(num[0]))
      throw ParseError(std::string(source_name) + ":" +
                       std::to_string(tokens[t + 3].line) +
                       ": field 'm' must be an integer");
    r.e.m = int(num[0]);
    r.e.gamma = num[1];
    r.e.lambda3 = num[2];
    r.e.c = num[3];
    r.e.d = num[4];
    r.e.h = num[5];
    r.e.eta = num[6];
    r.e.beta = num[7];
    r.e.lambda2 = num[8];
    r.e.big_b = num[9];
    r.e.big_r = num[10];
    r.e.big_d = num[11];
    r.e.lambda1 = num[12];
    r.e.big_a = num[13];
    raw.push_back(std::move(r));
  }

  const std::size_t s = species.size();
  std::vector<TersoffEntry> entries(s * s * s);
  std::vector<bool> seen(s * s * s, false);
  for (const RawEntry& r : raw) {
    const std::size_t idx = std::size_t((r.si * int(s) + r.sj) * int(s) + r.sk);
    if (seen[idx])
      throw ParseError(std::string(source_name) + ":" + std::to_string(r.line) +
                       ": duplicate entry for triplet " + species[r.si] + " " +
                       species[r.sj] + " " + species[r.sk]);
    seen[idx] = true;
    entries[idx] = r.e;
  }
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j)
      for (std::size_t k = 0; k < s; ++k)
        if (!seen[(i * s + j) * s + k])
          throw ParseError(std::string(source_name) + ": missing entry for triplet " +
                           species[i] + " " + species[j] + " " + species[k]);

  return ParamTable(std::move(species), std::move(entries));
}

ParamTable load_param_file(std::istream& in, std::string_view source_name) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_param_text(buf.str(), source_name);
}

ParamTable load_param_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open parameter file: " + path);
  return load_param_file(in, path);
}

std::string serialize_param_table(const ParamTable& table) {
  std::string out;
  out += "# element1 element2 element3 m gamma lambda3 c d h eta beta lambda2 B R D lambda1 A\n";
  const int s = table.species_count();
  const auto& names = table.species_names();
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j)
      for (int k = 0; k < s; ++k) {
        const TersoffEntry& e = table.entry(i, j, k);
        out += names[std::size_t(i)] + " " + names[std::size_t(j)] + " " +
               names[std::size_t(k)];
        out += " " + std::to_string(e.m);
        const double num[13] = {e.gamma, e.lambda3, e.c, e.d, e.h, e.eta,
                                e.beta, e.lambda2, e.big_b, e.big_r, e.big_d,
                                e.lambda1, e.big_a};
        for (double v : num) out += " " + format_shortest(v);
        out += "\n";
      }
  return out;
}

ParamTable builtin_silicon() {
  // Si(B) parameterization in metal units; identical to data/Si.tersoff.
  static const char* text =
      "Si Si Si 3.0 1.0 1.3258 4.8381 2.0417 0.0000 22.956 "
      "0.33675 1.3258 95.373 3.0 0.2 3.2394 3264.7\n";
  return parse_param_text(text, "<builtin Si>");
}

}  // namespace tmd
