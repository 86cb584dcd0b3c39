#include "exactsub/sdpa_io.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace exactsub {

namespace {

void write_entry(std::ostream& out, int matno, const SparseEntry& e) {
  out << matno << ' ' << e.block + 1 << ' ' << e.row + 1 << ' ' << e.col + 1 << ' '
      << std::setprecision(17) << e.value << '\n';
}

// Splits the non-comment content into whitespace tokens after replacing the
// separator characters SDPA files commonly carry.
std::istringstream token_stream(std::istream& in) {
  std::string content, line;
  while (std::getline(in, line)) {
    if (!line.empty() && (line[0] == '"' || line[0] == '*')) continue;
    for (char& ch : line)
      if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')') ch = ' ';
    content += line;
    content += '\n';
  }
  return std::istringstream(content);
}

}  // namespace

void write_sdpa(std::ostream& out, const SdpProblem& problem) {
  out << "\"exactsub model: " << problem.constraints.size() << " constraints\n";
  out << problem.constraints.size() << '\n' << problem.blocks.size() << '\n';
  for (std::size_t b = 0; b < problem.blocks.size(); ++b) {
    const auto& blk = problem.blocks[b];
    out << (b ? " " : "") << (blk.kind == BlockKind::psd ? blk.dim : -blk.dim);
  }
  out << '\n';
  for (std::size_t i = 0; i < problem.constraints.size(); ++i)
    out << (i ? " " : "") << std::setprecision(17) << problem.constraints[i].rhs;
  out << '\n';
  for (const auto& e : problem.objective) write_entry(out, 0, e);
  for (std::size_t i = 0; i < problem.constraints.size(); ++i)
    for (const auto& e : problem.constraints[i].entries) write_entry(out, static_cast<int>(i) + 1, e);
}

SdpProblem read_sdpa(std::istream& in) {
  auto ts = token_stream(in);
  long long m = 0, nblocks = 0;
  if (!(ts >> m >> nblocks) || m < 0 || nblocks < 0) throw std::runtime_error("SDPA: bad header");
  SdpProblem p;
  for (long long b = 0; b < nblocks; ++b) {
    long long size = 0;
    if (!(ts >> size) || size == 0) throw std::runtime_error("SDPA: bad block structure");
    p.blocks.push_back({size > 0 ? BlockKind::psd : BlockKind::nonneg, static_cast<int>(size > 0 ? size : -size)});
  }
  p.constraints.resize(static_cast<std::size_t>(m));
  for (auto& c : p.constraints)
    if (!(ts >> c.rhs)) throw std::runtime_error("SDPA: bad right-hand side vector");
  long long matno, blk, i, j;
  double value;
  while (ts >> matno >> blk >> i >> j >> value) {
    if (matno < 0 || matno > m || blk < 1 || blk > nblocks) throw std::runtime_error("SDPA: entry index out of range");
    if (i > j) std::swap(i, j);
    const SparseEntry e{static_cast<int>(blk - 1), static_cast<int>(i - 1), static_cast<int>(j - 1), value};
    if (matno == 0) {
      p.objective.push_back(e);
    } else {
      p.constraints[static_cast<std::size_t>(matno - 1)].entries.push_back(e);
    }
  }
  if (!ts.eof()) throw std::runtime_error("SDPA: malformed entry line");
  for (std::size_t b = 0; b < p.blocks.size(); ++b)
    if (p.blocks[b].kind == BlockKind::nonneg && p.nonneg_block < 0) p.nonneg_block = static_cast<int>(b);
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("SDPA: ") + e.what());
  }
  return p;
}

}  // namespace exactsub
