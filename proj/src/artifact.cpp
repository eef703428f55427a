#include "lapmor/artifact.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace lapmor {

namespace {

constexpr char kMagic[8] = {'L', 'A', 'P', 'M', 'O', 'R', 'A', '\0'};
constexpr std::size_t kNameLen = 24;

class Writer {
 public:
  void u64(std::uint64_t v) { raw(&v, sizeof v); }
  void f64(double v) { raw(&v, sizeof v); }
  void cplx(Complex z) {
    f64(z.real());
    f64(z.imag());
  }
  void vec(const Vec& v) {
    u64(static_cast<std::uint64_t>(v.size()));
    raw(v.data(), sizeof(double) * static_cast<std::size_t>(v.size()));
  }
  void cmat(const CMat& m) {
    u64(static_cast<std::uint64_t>(m.rows()));
    u64(static_cast<std::uint64_t>(m.cols()));
    raw(m.data(), sizeof(Complex) * static_cast<std::size_t>(m.size()));
  }
  void text(const std::string& s) { raw(s.data(), s.size()); }
  std::string take() { return std::move(buf_); }

 private:
  void raw(const void* p, std::size_t n) { buf_.append(static_cast<const char*>(p), n); }
  std::string buf_;
};

class Reader {
 public:
  explicit Reader(const std::string& s) : s_(s) {}
  std::uint64_t u64() { return get<std::uint64_t>(); }
  double f64() { return get<double>(); }
  Complex cplx() {
    const double re = f64();
    return {re, f64()};
  }
  Vec vec() {
    Vec v(static_cast<Index>(u64()));
    raw(v.data(), sizeof(double) * static_cast<std::size_t>(v.size()));
    return v;
  }
  CMat cmat() {
    const auto r = static_cast<Index>(u64());
    const auto c = static_cast<Index>(u64());
    CMat m(r, c);
    raw(m.data(), sizeof(Complex) * static_cast<std::size_t>(m.size()));
    return m;
  }

 private:
  template <class T>
  T get() {
    T v;
    raw(&v, sizeof v);
    return v;
  }
  void raw(void* p, std::size_t n) {
    if (pos_ + n > s_.size()) throw ArtifactError("artifact: truncated section");
    std::memcpy(p, s_.data() + pos_, n);
    pos_ += n;
  }
  const std::string& s_;
  std::size_t pos_ = 0;
};

std::string encode_basis(const ReducedBasis& b) {
  Writer w;
  w.cmat(b.columns);
  w.u64(b.provenance.size());
  for (const auto& o : b.provenance) {
    w.cplx(o.z);
    w.vec(o.mu);
  }
  return w.take();
}

ReducedBasis decode_basis(const std::string& s) {
  Reader r(s);
  ReducedBasis b;
  b.columns = r.cmat();
  const auto n = r.u64();
  for (std::uint64_t k = 0; k < n; ++k) {
    const Complex z = r.cplx();
    b.provenance.push_back({z, r.vec()});
  }
  return b;
}

std::string encode_reduced(const ReducedModel& m) {
  Writer w;
  w.u64(static_cast<std::uint64_t>(m.n_r));
  w.u64(static_cast<std::uint64_t>(m.param_dim));
  w.u64(m.op_terms.size());
  w.u64(m.rhs_terms.size());
  for (const auto& a : m.op_terms) w.cmat(a);
  for (const auto& b : m.rhs_terms) w.cmat(b);
  w.cmat(m.identity);
  w.cmat(m.r_factor);
  w.u64(m.conjugate_closed ? 1 : 0);
  return w.take();
}

ReducedModel decode_reduced(const std::string& s) {
  Reader r(s);
  ReducedModel m;
  m.n_r = static_cast<Index>(r.u64());
  m.param_dim = static_cast<Index>(r.u64());
  const auto qa = r.u64(), qb = r.u64();
  for (std::uint64_t q = 0; q < qa; ++q) m.op_terms.push_back(r.cmat());
  for (std::uint64_t q = 0; q < qb; ++q) m.rhs_terms.push_back(r.cmat().col(0));
  m.identity = r.cmat();
  m.r_factor = r.cmat();
  m.conjugate_closed = r.u64() != 0;
  return m;
}

std::string numbered(const char* prefix, std::size_t j) {
  char buf[kNameLen];
  std::snprintf(buf, sizeof buf, "%s%06zu", prefix, j);
  return buf;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void save_artifact(const std::string& path, const OfflineArtifact& art) {
  std::vector<std::pair<std::string, std::string>> sections;
  std::ostringstream meta;
  auto all = art.meta;
  all["contour.a1"] = fmt(art.grid.contour.a1);
  all["contour.a2"] = fmt(art.grid.contour.a2);
  all["contour.c"] = fmt(art.grid.c);
  all["contour.N"] = std::to_string(art.grid.N);
  all["window.t0"] = fmt(art.window.t0);
  all["window.Lambda"] = fmt(art.window.Lambda);
  for (const auto& [k, v] : all) meta << k << '=' << v << '\n';
  sections.emplace_back("meta", meta.str());
  {
    Writer w;
    w.vec(art.sigma_lb);
    sections.emplace_back("sigma_lb", w.take());
  }
  if (art.local_bases.empty()) {
    sections.emplace_back("basis", encode_basis(art.basis));
    sections.emplace_back("reduced", encode_reduced(art.reduced));
  }
  for (std::size_t j = 0; j < art.local_bases.size(); ++j) {
    sections.emplace_back(numbered("lbasis", j), encode_basis(art.local_bases[j]));
    sections.emplace_back(numbered("lreduced", j), encode_reduced(art.local_models[j]));
  }

  Writer head;
  head.text(std::string(kMagic, sizeof kMagic));
  std::uint32_t ver = kArtifactVersion, count = static_cast<std::uint32_t>(sections.size());
  head.text(std::string(reinterpret_cast<const char*>(&ver), 4));
  head.text(std::string(reinterpret_cast<const char*>(&count), 4));
  std::uint64_t offset = sizeof kMagic + 8 + sections.size() * (kNameLen + 16);
  for (const auto& [name, data] : sections) {
    std::string padded = name;
    padded.resize(kNameLen, '\0');
    head.text(padded);
    head.u64(offset);
    head.u64(data.size());
    offset += data.size();
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ArtifactError("cannot open " + path + " for writing");
  const std::string h = head.take();
  out.write(h.data(), static_cast<std::streamsize>(h.size()));
  for (const auto& s : sections) out.write(s.second.data(), static_cast<std::streamsize>(s.second.size()));
  if (!out) throw ArtifactError("failed writing " + path);
}

OfflineArtifact load_artifact(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArtifactError("cannot open " + path);
  const std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (all.size() < 16 || std::memcmp(all.data(), kMagic, sizeof kMagic) != 0)
    throw ArtifactError(path + ": not an offline artifact");
  std::uint32_t ver, count;
  std::memcpy(&ver, all.data() + 8, 4);
  std::memcpy(&count, all.data() + 12, 4);
  if (ver != kArtifactVersion) throw ArtifactError(path + ": unsupported version " + std::to_string(ver));
  std::map<std::string, std::string> sec;
  std::size_t pos = 16;
  for (std::uint32_t k = 0; k < count; ++k) {
    if (pos + kNameLen + 16 > all.size()) throw ArtifactError(path + ": truncated index");
    std::string name(all.data() + pos, kNameLen);
    name.resize(std::strlen(name.c_str()));
    std::uint64_t off, len;
    std::memcpy(&off, all.data() + pos + kNameLen, 8);
    std::memcpy(&len, all.data() + pos + kNameLen + 8, 8);
    if (off + len > all.size()) throw ArtifactError(path + ": section " + name + " out of bounds");
    sec[name] = all.substr(off, len);
    pos += kNameLen + 16;
  }
  OfflineArtifact art;
  std::istringstream meta(sec.at("meta"));
  std::string line;
  while (std::getline(meta, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) art.meta[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto num = [&](const char* k) {
    auto it = art.meta.find(k);
    if (it == art.meta.end()) throw ArtifactError(std::string("artifact: missing ") + k);
    return std::stod(it->second);
  };
  art.grid = build_grid(ParabolicContour(num("contour.a1"), num("contour.a2")), num("contour.c"),
                        static_cast<int>(num("contour.N")));
  art.window = TimeWindow(num("window.t0"), num("window.Lambda"));
  art.sigma_lb = Reader(sec.at("sigma_lb")).vec();
  if (sec.count("basis")) {
    art.basis = decode_basis(sec.at("basis"));
    art.reduced = decode_reduced(sec.at("reduced"));
  }
  for (std::size_t j = 0; sec.count(numbered("lbasis", j)); ++j) {
    art.local_bases.push_back(decode_basis(sec.at(numbered("lbasis", j))));
    art.local_models.push_back(decode_reduced(sec.at(numbered("lreduced", j))));
  }
  return art;
}

}  // namespace lapmor
