#include "lsm/pbm.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "lsm/errors.hpp"

namespace lsm {

namespace {

// Next non-whitespace character with PBM '#' comments skipped.
int next_token_char(std::istream& in) {
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
      continue;
    }
    if (!std::isspace(c)) return c;
  }
  return EOF;
}

int read_pbm_int(std::istream& in) {
  int c = next_token_char(in);
  if (c == EOF || !std::isdigit(c)) throw DataError("pbm: expected integer");
  int v = 0;
  while (c != EOF && std::isdigit(c)) {
    v = v * 10 + (c - '0');
    if (v > 100000000) throw DataError("pbm: integer too large");
    c = in.get();
  }
  return v;
}

}  // namespace

BinaryImage read_pbm(std::istream& in) {
  int c = next_token_char(in);
  if (c != 'P' || in.get() != '1') throw DataError("pbm: not a P1 file");
  BinaryImage img;
  img.width = read_pbm_int(in);
  img.height = read_pbm_int(in);
  if (img.width < 1 || img.height < 1) throw DataError("pbm: degenerate size");
  const long long total = static_cast<long long>(img.width) * img.height;
  img.pixels.reserve(static_cast<std::size_t>(total));
  for (long long i = 0; i < total; ++i) {
    c = next_token_char(in);
    if (c != '0' && c != '1') throw DataError("pbm: expected 0/1 raster");
    img.pixels.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return img;
}

void write_pbm(const BinaryImage& img, std::ostream& out) {
  out << "P1\n" << img.width << ' ' << img.height << '\n';
  for (int r = 0; r < img.height; ++r) {
    int col = 0;
    for (int c = 0; c < img.width; ++c) {
      out << (img.pixels[static_cast<std::size_t>(r) * img.width + c] ? '1' : '0');
      if (++col == 64 && c + 1 < img.width) {  // keep lines short
        out << '\n';
        col = 0;
      }
    }
    out << '\n';
  }
}

BinaryImage read_pbm_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return read_pbm(in);
}

void write_pbm_file(const BinaryImage& img, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  write_pbm(img, out);
}

}  // namespace lsm
