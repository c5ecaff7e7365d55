#include "tactile/checkpoint.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace tactile {
namespace {

constexpr std::string_view kMagic = "tactile-dbm-checkpoint";

void put_matrix(std::ostringstream& out, std::string_view name, const Matrix& m) {
  out << "matrix " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out << (c ? " " : "") << format_hexfloat(m(r, c));
    out << '\n';
  }
}

void put_vector(std::ostringstream& out, std::string_view name, const Vector& v) {
  out << "vector " << name << ' ' << v.size() << '\n';
  for (Eigen::Index i = 0; i < v.size(); ++i) out << (i ? " " : "") << format_hexfloat(v[i]);
  out << '\n';
}

void put_mask(std::ostringstream& out, std::string_view name, const ConnectivityMask& mask) {
  out << "mask " << name << ' ' << mask.pre_size() << ' ' << mask.post_size() << '\n';
  for (std::size_t r = 0; r < mask.pre_size(); ++r) {
    for (std::size_t c = 0; c < mask.post_size(); ++c) out << (mask.allowed(r, c) ? '1' : '0');
    out << '\n';
  }
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::string_view line() {
    if (pos_ >= text_.size()) fail("unexpected end of file");
    const std::size_t end = text_.find('\n', pos_);
    std::string_view l = text_.substr(pos_, end == std::string_view::npos ? std::string_view::npos : end - pos_);
    pos_ = end == std::string_view::npos ? text_.size() : end + 1;
    ++line_no_;
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    return l;
  }

  std::vector<std::string_view> words() {
    std::vector<std::string_view> out;
    std::string_view l = line();
    std::size_t i = 0;
    while (i < l.size()) {
      while (i < l.size() && l[i] == ' ') ++i;
      const std::size_t j = l.find(' ', i);
      const std::size_t stop = j == std::string_view::npos ? l.size() : j;
      if (stop > i) out.push_back(l.substr(i, stop - i));
      i = stop;
    }
    return out;
  }

  // Reads "<kind> <name> <dims...>" and checks kind and name.
  std::vector<std::size_t> header(std::string_view kind, std::string_view name, std::size_t dims) {
    const auto w = words();
    if (w.size() != 2 + dims || w[0] != kind || w[1] != name) {
      fail("expected '" + std::string(kind) + " " + std::string(name) + "'");
    }
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < dims; ++k) out.push_back(count(w[2 + k]));
    return out;
  }

  std::size_t count(std::string_view token) {
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || p != token.data() + token.size()) fail("bad integer '" + std::string(token) + "'");
    return static_cast<std::size_t>(v);
  }

  Matrix matrix(std::string_view name) {
    const auto d = header("matrix", name, 2);
    Matrix m(static_cast<Eigen::Index>(d[0]), static_cast<Eigen::Index>(d[1]));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const auto w = words();
      if (w.size() != d[1]) fail("row of " + std::string(name) + " has the wrong length");
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = number(w[static_cast<std::size_t>(c)]);
    }
    return m;
  }

  Vector vector(std::string_view name) {
    const auto d = header("vector", name, 1);
    Vector v(static_cast<Eigen::Index>(d[0]));
    const auto w = d[0] == 0 ? std::vector<std::string_view>{} : words();
    if (w.size() != d[0]) fail(std::string(name) + " has the wrong length");
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = number(w[static_cast<std::size_t>(i)]);
    return v;
  }

  ConnectivityMask mask(std::string_view name) {
    const auto d = header("mask", name, 2);
    Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> allowed(static_cast<Eigen::Index>(d[0]),
                                                               static_cast<Eigen::Index>(d[1]));
    for (Eigen::Index r = 0; r < allowed.rows(); ++r) {
      const std::string_view l = line();
      if (l.size() != d[1] || l.find_first_not_of("01") != std::string_view::npos) {
        fail("bad row in " + std::string(name));
      }
      for (Eigen::Index c = 0; c < allowed.cols(); ++c) allowed(r, c) = l[static_cast<std::size_t>(c)] == '1';
    }
    return ConnectivityMask(allowed);
  }

  double number(std::string_view token) {
    try {
      return parse_hexfloat(token);
    } catch (const ParseError& e) {
      fail(e.what());
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("checkpoint line " + std::to_string(line_no_) + ": " + what);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

}  // namespace

std::string format_hexfloat(double x) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::hex);
  if (ec != std::errc()) throw NumericError("cannot format value");
  return std::string(buf, end);
}

double parse_hexfloat(std::string_view token) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), x, std::chars_format::hex);
  if (ec != std::errc() || p != token.data() + token.size()) {
    throw ParseError("bad number '" + std::string(token) + "'");
  }
  return x;
}

std::string format_checkpoint(const Checkpoint& checkpoint) {
  const DbmParams& p = checkpoint.params;
  p.validate();
  std::ostringstream out;
  out << kMagic << ' ' << kCheckpointVersion << '\n';
  out << "seed " << checkpoint.seed << '\n';
  out << "config " << checkpoint.config.size() << '\n';
  for (const auto& [key, value] : checkpoint.config) {
    if (key.find_first_of("=\n") != std::string::npos || value.find('\n') != std::string::npos) {
      throw InvalidInput("config echo entry '" + key + "' cannot be stored");
    }
    out << key << '=' << value << '\n';
  }
  put_mask(out, "mask1", p.mask1);
  put_mask(out, "mask2", p.mask2);
  put_matrix(out, "w1", p.w1);
  put_matrix(out, "w2", p.w2);
  put_vector(out, "visible_bias", p.visible_bias);
  put_vector(out, "hidden1_bias", p.hidden1_bias);
  put_vector(out, "hidden2_bias", p.hidden2_bias);
  return out.str();
}

Checkpoint parse_checkpoint(std::string_view text) {
  Reader in(text);
  Checkpoint c;
  {
    const auto w = in.words();
    if (w.size() != 2 || w[0] != kMagic) in.fail("not a checkpoint file");
    if (in.count(w[1]) != static_cast<std::size_t>(kCheckpointVersion)) {
      in.fail("unsupported version " + std::string(w[1]));
    }
  }
  {
    const auto w = in.words();
    if (w.size() != 2 || w[0] != "seed") in.fail("expected 'seed'");
    c.seed = in.count(w[1]);
  }
  {
    const auto w = in.words();
    if (w.size() != 2 || w[0] != "config") in.fail("expected 'config'");
    const std::size_t n = in.count(w[1]);
    for (std::size_t k = 0; k < n; ++k) {
      const std::string_view l = in.line();
      const std::size_t eq = l.find('=');
      if (eq == std::string_view::npos) in.fail("config echo line without '='");
      c.config.emplace_back(std::string(l.substr(0, eq)), std::string(l.substr(eq + 1)));
    }
  }
  DbmParams& p = c.params;
  p.mask1 = in.mask("mask1");
  p.mask2 = in.mask("mask2");
  p.w1 = in.matrix("w1");
  p.w2 = in.matrix("w2");
  p.visible_bias = in.vector("visible_bias");
  p.hidden1_bias = in.vector("hidden1_bias");
  p.hidden2_bias = in.vector("hidden2_bias");
  try {
    p.validate();
  } catch (const std::exception& e) {
    throw ParseError(std::string("checkpoint is inconsistent: ") + e.what());
  }
  if (!p.w1.cwiseProduct(Matrix::Ones(p.w1.rows(), p.w1.cols()) - p.mask1.gate()).isZero(0.0) ||
      !p.w2.cwiseProduct(Matrix::Ones(p.w2.rows(), p.w2.cols()) - p.mask2.gate()).isZero(0.0)) {
    throw ParseError("checkpoint has weights outside its connectivity mask");
  }
  return c;
}

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  const std::string text = format_checkpoint(checkpoint);
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_checkpoint(buf.str());
}

}  // namespace tactile
