/*******************************************************************************
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*******************************************************************************/
#include "moutard/field_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

namespace moutard {

namespace {

void append_double(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

void append_list(std::string& out, const std::vector<double>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i)
      out += ',';
    append_double(out, v[i]);
  }
}

std::string header(const Grid& g, const char* kind) {
  std::string h = "# grid d=" + std::to_string(g.dim()) + " origin=";
  append_list(h, g.origin());
  h += " spacing=";
  append_list(h, g.spacing());
  h += " shape=";
  for (std::size_t i = 0; i < g.shape().size(); ++i) {
    if (i)
      h += ',';
    h += std::to_string(g.shape()[i]);
  }
  h += " kind=";
  h += kind;
  h += '\n';
  return h;
}

double parse_double(const std::string& tok, const std::string& where) {
  const char* s = tok.c_str();
  char* end = nullptr;
  const double v = std::strtod(s, &end);
  if (end == s || *end != '\0')
    throw ParseError(where + ": bad number '" + tok + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("cannot open for writing: " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out)
    throw IoError("write failed: " + path);
}

} // namespace

std::string format_field(const ScalarField& f) {
  std::string out = header(f.grid(), "real");
  out.reserve(out.size() + f.size() * 20);
  for (std::size_t i = 0; i < f.size(); ++i) {
    append_double(out, f[i]);
    out += '\n';
  }
  return out;
}

std::string format_field(const ComplexField& f) {
  std::string out = header(f.grid(), "complex");
  out.reserve(out.size() + f.size() * 40);
  for (std::size_t i = 0; i < f.size(); ++i) {
    append_double(out, f[i].real());
    out += ',';
    append_double(out, f[i].imag());
    out += '\n';
  }
  return out;
}

void write_field(const std::string& path, const ScalarField& f) {
  write_text(path, format_field(f));
}

void write_field(const std::string& path, const ComplexField& f) {
  write_text(path, format_field(f));
}

AnyField parse_field(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw ParseError(name + ": empty field file");
  if (line.rfind("# grid ", 0) != 0)
    throw ParseError(name + ": missing '# grid' header");

  int dim = -1;
  std::vector<double> origin, spacing;
  std::vector<std::size_t> shape;
  std::string kind;
  std::istringstream hs(line.substr(7));
  std::string tok;
  while (hs >> tok) {
    const std::size_t eq = tok.find('=');
    if (eq == std::string::npos)
      throw ParseError(name + ": bad header token '" + tok + "'");
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    if (key == "d") {
      dim = std::atoi(val.c_str());
    } else if (key == "origin" || key == "spacing") {
      std::vector<double> v;
      for (const auto& piece : split(val, ','))
        v.push_back(parse_double(piece, name));
      (key == "origin" ? origin : spacing) = std::move(v);
    } else if (key == "shape") {
      for (const auto& piece : split(val, ','))
        shape.push_back(static_cast<std::size_t>(std::atoll(piece.c_str())));
    } else if (key == "kind") {
      kind = val;
    } else {
      throw ParseError(name + ": unknown header key '" + key + "'");
    }
  }
  if (dim <= 0 || origin.empty() || spacing.empty() || shape.empty() ||
      kind.empty())
    throw ParseError(name + ": incomplete header");
  if (static_cast<std::size_t>(dim) != shape.size())
    throw ParseError(name + ": header d does not match shape length");
  Grid grid(origin, spacing, shape);

  const bool is_complex = kind == "complex";
  if (!is_complex && kind != "real")
    throw ParseError(name + ": kind must be real or complex");

  if (is_complex) {
    std::vector<Complex> v;
    v.reserve(grid.size());
    while (std::getline(in, line)) {
      if (line.empty())
        continue;
      const std::size_t comma = line.find(',');
      if (comma == std::string::npos)
        throw ParseError(name + ": complex value needs 're,im': '" + line + "'");
      v.emplace_back(parse_double(line.substr(0, comma), name),
                     parse_double(line.substr(comma + 1), name));
    }
    if (v.size() != grid.size())
      throw ParseError(name + ": expected " + std::to_string(grid.size()) +
                       " values, got " + std::to_string(v.size()));
    return ComplexField(grid, std::move(v));
  }

  std::vector<double> v;
  v.reserve(grid.size());
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    v.push_back(parse_double(line, name));
  }
  if (v.size() != grid.size())
    throw ParseError(name + ": expected " + std::to_string(grid.size()) +
                     " values, got " + std::to_string(v.size()));
  return ScalarField(grid, std::move(v));
}

AnyField read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_field(ss.str(), path);
}

ScalarField read_scalar_field(const std::string& path) {
  AnyField f = read_field(path);
  if (auto* s = std::get_if<ScalarField>(&f))
    return std::move(*s);
  throw ParseError(path + ": expected a real field, found complex");
}

ComplexField read_complex_field(const std::string& path) {
  AnyField f = read_field(path);
  if (auto* c = std::get_if<ComplexField>(&f))
    return std::move(*c);
  throw ParseError(path + ": expected a complex field, found real");
}

} // namespace moutard
