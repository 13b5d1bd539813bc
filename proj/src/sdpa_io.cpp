#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "symmetra/solver.hpp"

namespace symmetra {

namespace {

void put_entries(std::ostringstream& os, int matno, const BlockDiagMat& Fi) {
  char buf[64];
  for (std::size_t b = 0; b < Fi.size(); ++b) {
    const auto& blk = Fi[b];
    if (blk.diagonal) {
      for (Index i = 0; i < blk.vec.size(); ++i)
        if (blk.vec[i] != 0.0) {
          std::snprintf(buf, sizeof buf, "%.17g", blk.vec[i]);
          os << matno << ' ' << (b + 1) << ' ' << (i + 1) << ' ' << (i + 1)
             << ' ' << buf << '\n';
        }
    } else {
      for (int i = 0; i < blk.size; ++i)
        for (int j = i; j < blk.size; ++j)
          if (blk.mat(i, j) != 0.0) {
            std::snprintf(buf, sizeof buf, "%.17g", blk.mat(i, j));
            os << matno << ' ' << (b + 1) << ' ' << (i + 1) << ' ' << (j + 1)
               << ' ' << buf << '\n';
          }
    }
  }
}

}  // namespace

std::string to_sdpa_string(const SDPAProblem& prob) {
  prob.validate();
  std::ostringstream os;
  char buf[64];
  if (prob.objective_offset != 0.0) {
    std::snprintf(buf, sizeof buf, "%.17g", prob.objective_offset);
    os << "\"offset = " << buf << '\n';
  }
  os << prob.m << '\n';
  os << prob.block_sizes.size() << '\n';
  for (std::size_t b = 0; b < prob.block_sizes.size(); ++b)
    os << prob.block_sizes[b] << (b + 1 < prob.block_sizes.size() ? ' ' : '\n');
  if (prob.block_sizes.empty()) os << '\n';
  for (int i = 0; i < prob.m; ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", prob.c[i]);
    os << buf << (i + 1 < prob.m ? ' ' : '\n');
  }
  if (prob.m == 0) os << '\n';
  for (int i = 0; i <= prob.m; ++i) put_entries(os, i, prob.F[i]);
  return os.str();
}

void write_sdpa(const SDPAProblem& prob, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << to_sdpa_string(prob);
}

SDPAProblem parse_sdpa_string(const std::string& text) {
  SDPAProblem prob;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  int stage = 0;  // 0: m, 1: nblocks, 2: sizes, 3: c, 4: entries
  int nblocks = 0;
  std::vector<double> cbuf;

  auto fail = [&](const std::string& what) {
    throw ParseError("sdpa: " + what, lineno);
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && (line[0] == '"' || line[0] == '*')) {
      const auto pos = line.find("offset =");
      if (pos != std::string::npos) {
        try {
          prob.objective_offset = std::stod(line.substr(pos + 8));
        } catch (const std::exception&) {
          fail("bad offset comment");
        }
      }
      continue;
    }
    // sizes lines may carry braces/parens/commas
    for (char& ch : line)
      if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')')
        ch = ' ';
    std::istringstream ls(line);
    if (stage == 0) {
      if (!(ls >> prob.m)) continue;  // blank line
      if (prob.m < 0) fail("negative variable count");
      stage = 1;
    } else if (stage == 1) {
      if (!(ls >> nblocks)) continue;
      if (nblocks <= 0) fail("bad block count");
      stage = 2;
    } else if (stage == 2) {
      int v;
      while (ls >> v) prob.block_sizes.push_back(v);
      if (static_cast<int>(prob.block_sizes.size()) < nblocks) continue;
      if (static_cast<int>(prob.block_sizes.size()) != nblocks)
        fail("too many block sizes");
      for (int bs : prob.block_sizes)
        if (bs == 0) fail("zero block size");
      prob.c.resize(prob.m);
      stage = (prob.m == 0) ? 4 : 3;
      if (stage == 4) prob.F.assign(1, prob.zero_template());
    } else if (stage == 3) {
      double v;
      while (ls >> v) cbuf.push_back(v);
      if (static_cast<int>(cbuf.size()) < prob.m) continue;
      if (static_cast<int>(cbuf.size()) != prob.m) fail("too many costs");
      for (int i = 0; i < prob.m; ++i) prob.c[i] = cbuf[i];
      prob.F.assign(prob.m + 1, prob.zero_template());
      stage = 4;
    } else {
      int matno, blk, i, j;
      double v;
      if (!(ls >> matno)) continue;  // blank line
      if (!(ls >> blk >> i >> j >> v)) fail("short entry line");
      if (matno < 0 || matno > prob.m) fail("matrix index out of range");
      if (blk < 1 || blk > nblocks) fail("block index out of range");
      const int bs = std::abs(prob.block_sizes[blk - 1]);
      if (i < 1 || j < 1 || i > bs || j > bs) fail("entry index out of range");
      auto& target = prob.F[matno][blk - 1];
      if (target.diagonal) {
        if (i != j) fail("off-diagonal entry in a diagonal block");
        target.vec[i - 1] = v;
      } else {
        target.mat(i - 1, j - 1) = v;
        target.mat(j - 1, i - 1) = v;
      }
    }
  }
  if (stage < 4) throw ParseError("sdpa: truncated header", lineno);
  return prob;
}

SDPAProblem read_sdpa(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_sdpa_string(ss.str());
}

}  // namespace symmetra
