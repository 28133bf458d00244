#ifndef LSM_PBM_HPP
#define LSM_PBM_HPP

#include <iosfwd>
#include <string>

#include "lsm/submodular.hpp"

namespace lsm {

// Row-major binary image; pixel (r, c) is bit r*width + c, 1 = foreground.
struct BinaryImage {
  int height = 0;
  int width = 0;
  BinaryVector pixels;
};

// ASCII PBM ("P1"), with # comments. 1 = black = foreground.
BinaryImage read_pbm(std::istream& in);
void write_pbm(const BinaryImage& img, std::ostream& out);

BinaryImage read_pbm_file(const std::string& path);
void write_pbm_file(const BinaryImage& img, const std::string& path);

}  // namespace lsm

#endif
