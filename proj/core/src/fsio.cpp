#include "dadmm/fsio.hpp"

#include <fstream>
#include <sstream>

#include "dadmm/errors.hpp"

namespace dadmm {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  if (!out.good()) throw IoError("write failed for " + path);
}

}  // namespace dadmm
