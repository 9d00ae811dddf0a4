#include "panella/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <tuple>

#include "panella/apps.hpp"
#include "panella/level3.hpp"
#include "panella/oracle.hpp"
#include "panella/pack.hpp"
#include "panella/ref_impl.hpp"

namespace panella::bench {

namespace {

constexpr double kGateTolerance = 1e-10;
constexpr int kRiccatiHorizon = 10;

struct RoutineInfo {
  const char* name;
  std::vector<std::string> impls;
};

const std::vector<RoutineInfo>& table() {
  static const std::vector<RoutineInfo> t = {
      {"gemm_nt", {"hp", "rf", "naive"}},   {"gemm_nn", {"hp", "rf", "naive"}}, {"syrk_ln", {"hp", "naive"}},
      {"trmm_rlnn", {"hp", "naive"}},       {"trsm_rltn", {"hp", "naive"}},     {"potrf_l", {"hp", "rf", "naive"}},
      {"getrf", {"hp", "naive"}},           {"gelqf", {"hp", "naive"}},         {"riccati", {"hp", "naive"}},
      {"riccati_pack", {"hp"}},
  };
  return t;
}

ColMatrix random_matrix(std::mt19937_64& rng, int m, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ColMatrix A(m, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i) A(i, j) = u(rng);
  return A;
}

ColMatrix random_spd(std::mt19937_64& rng, int n) {
  const ColMatrix M = random_matrix(rng, n, n);
  ColMatrix S = oracle::gemm_nt(1.0, M, M, 0.0, {});
  for (int i = 0; i < n; ++i) S(i, i) += n;
  return S;
}

ColMatrix lower_part(const ColMatrix& A) {
  ColMatrix L(A.rows(), A.cols());
  for (int j = 0; j < A.cols(); ++j)
    for (int i = j; i < A.rows(); ++i) L(i, j) = A(i, j);
  return L;
}

// Columns scaled so that the diagonal is non-negative.
ColMatrix sign_normalized(const ColMatrix& L) {
  ColMatrix out = lower_part(L);
  for (int j = 0; j < std::min(L.rows(), L.cols()); ++j)
    if (L(j, j) < 0.0)
      for (int i = 0; i < L.rows(); ++i) out(i, j) = -out(i, j);
  return out;
}

// One benchmark instance at one size.
struct Workload {
  int m = 0, n = 0, k = 0;
  std::function<void()> call;
  std::function<double()> error;  // gate: relative error vs oracle
  std::vector<std::pair<std::string, ColMatrix>> operands;
};

struct RiccatiData {
  OcpData data;
  std::vector<ColMatrix> P;  // oracle P_0 .. P_N
};

RiccatiData make_riccati(std::mt19937_64& rng, int nx, int nu, int N) {
  RiccatiData r;
  r.data.dims = {nx, nu, N};
  for (int n = 0; n < N; ++n) {
    ColMatrix A = random_matrix(rng, nx, nx);
    for (int j = 0; j < nx; ++j)
      for (int i = 0; i < nx; ++i) A(i, j) = (i == j ? 1.0 : 0.0) + 0.1 * A(i, j);
    r.data.A.push_back(A);
    r.data.B.push_back(random_matrix(rng, nx, nu));
    r.data.Q.push_back(random_spd(rng, nx));
    r.data.R.push_back(random_spd(rng, nu));
    ColMatrix S = random_matrix(rng, nu, nx);
    for (int j = 0; j < nx; ++j)
      for (int i = 0; i < nu; ++i) S(i, j) *= 0.1;
    r.data.S.push_back(S);
  }
  r.data.PN = random_spd(rng, nx);
  return r;
}

Workload make_workload(const std::string& routine, const std::string& impl, int s, std::mt19937_64& rng) {
  Workload w;
  auto hp = impl == "hp";
  auto rf = impl == "rf";

  if (routine == "gemm_nt" || routine == "gemm_nn") {
    const bool nt = routine == "gemm_nt";
    w.m = w.n = w.k = s;
    auto A = std::make_shared<ColMatrix>(random_matrix(rng, s, s));
    auto B = std::make_shared<ColMatrix>(random_matrix(rng, s, s));
    auto C = std::make_shared<ColMatrix>(random_matrix(rng, s, s));
    w.operands = {{"A", *A}, {"B", *B}, {"C", *C}};
    auto ref = std::make_shared<ColMatrix>(nt ? oracle::gemm_nt(1.0, *A, *B, 1.0, *C) : oracle::gemm_nn(1.0, *A, *B, 1.0, *C));
    if (hp) {
      auto pa = std::make_shared<PanelMatrix>(to_panel(*A));
      auto pb = std::make_shared<PanelMatrix>(to_panel(*B));
      auto pc = std::make_shared<PanelMatrix>(to_panel(*C));
      auto pd = std::make_shared<PanelMatrix>(allocate_panel_matrix(s, s));
      w.call = [=] {
        if (nt)
          gemm_nt(s, s, s, 1.0, *pa, *pb, 1.0, *pc, *pd);
        else
          gemm_nn(s, s, s, 1.0, *pa, *pb, 1.0, *pc, *pd);
      };
      w.error = [=] { return oracle::max_rel_diff(to_col(*pd), *ref); };
    } else if (rf) {
      auto D = std::make_shared<ColMatrix>(s, s);
      w.call = [=] {
        if (nt)
          rf_gemm_nt(s, s, s, 1.0, *A, *B, 1.0, *C, *D);
        else
          rf_gemm_nn(s, s, s, 1.0, *A, *B, 1.0, *C, *D);
      };
      w.error = [=] { return oracle::max_rel_diff(*D, *ref); };
    } else {
      w.call = [=] { (void)(nt ? oracle::gemm_nt(1.0, *A, *B, 1.0, *C) : oracle::gemm_nn(1.0, *A, *B, 1.0, *C)); };
    }
    return w;
  }

  if (routine == "syrk_ln") {
    w.m = w.n = w.k = s;
    auto A = std::make_shared<ColMatrix>(random_matrix(rng, s, s));
    auto C = std::make_shared<ColMatrix>(random_matrix(rng, s, s));
    w.operands = {{"A", *A}, {"C", *C}};
    if (hp) {
      auto ref = std::make_shared<ColMatrix>(oracle::syrk_ln(1.0, *A, *A, 1.0, *C));
      auto pa = std::make_shared<PanelMatrix>(to_panel(*A));
      auto pc = std::make_shared<PanelMatrix>(to_panel(*C));
      auto pd = std::make_shared<PanelMatrix>(allocate_panel_matrix(s, s));
      w.call = [=] { syrk_ln(s, s, 1.0, *pa, *pa, 1.0, *pc, *pd); };
      w.error = [=] { return oracle::max_rel_diff(lower_part(to_col(*pd)), *ref); };
    } else {
      w.call = [=] { (void)oracle::syrk_ln(1.0, *A, *A, 1.0, *C); };
    }
    return w;
  }

  if (routine == "trmm_rlnn" || routine == "trsm_rltn") {
    const bool mm = routine == "trmm_rlnn";
    w.m = w.n = s;
    ColMatrix Lraw = random_matrix(rng, s, s);
    for (int i = 0; i < s; ++i) Lraw(i, i) = std::fabs(Lraw(i, i)) + s;
    auto L = std::make_shared<ColMatrix>(lower_part(Lraw));
    auto B = std::make_shared<ColMatrix>(random_matrix(rng, s, s));
    w.operands = {{"A", *L}, {"B", *B}};
    if (hp) {
      auto ref = std::make_shared<ColMatrix>(mm ? oracle::trmm_rlnn(1.0, *L, *B) : oracle::trsm("rltn", 1.0, *L, *B));
      auto pa = std::make_shared<PanelMatrix>(to_panel(*L));
      auto pb = std::make_shared<PanelMatrix>(to_panel(*B));
      auto pd = std::make_shared<PanelMatrix>(allocate_panel_matrix(s, s));
      w.call = [=] {
        if (mm)
          trmm_rlnn(s, s, 1.0, *pa, *pb, *pd);
        else
          trsm_rltn(s, s, 1.0, *pa, *pb, *pd);
      };
      w.error = [=] { return oracle::max_rel_diff(to_col(*pd), *ref); };
    } else {
      w.call = [=] { (void)(mm ? oracle::trmm_rlnn(1.0, *L, *B) : oracle::trsm("rltn", 1.0, *L, *B)); };
    }
    return w;
  }

  if (routine == "potrf_l") {
    w.m = w.n = s;
    auto C = std::make_shared<ColMatrix>(random_spd(rng, s));
    w.operands = {{"C", *C}};
    auto ref = std::make_shared<ColMatrix>(oracle::potrf(*C).L);
    if (hp) {
      auto pc = std::make_shared<PanelMatrix>(to_panel(*C));
      auto pd = std::make_shared<PanelMatrix>(allocate_panel_matrix(s, s));
      w.call = [=] { (void)potrf_l(s, *pc, *pd); };
      w.error = [=] { return oracle::max_rel_diff(lower_part(to_col(*pd)), *ref); };
    } else if (rf) {
      auto D = std::make_shared<ColMatrix>(s, s);
      w.call = [=] { (void)rf_potrf_l(s, *C, *D); };
      w.error = [=] { return oracle::max_rel_diff(lower_part(*D), *ref); };
    } else {
      w.call = [=] { (void)oracle::potrf(*C); };
    }
    return w;
  }

  if (routine == "getrf") {
    w.m = w.n = s;
    auto C = std::make_shared<ColMatrix>(random_matrix(rng, s, s));
    w.operands = {{"C", *C}};
    if (hp) {
      auto ref = std::make_shared<oracle::Lu>(oracle::getrf(*C, true));
      auto pc = std::make_shared<PanelMatrix>(to_panel(*C));
      auto pd = std::make_shared<PanelMatrix>(allocate_panel_matrix(s, s));
      auto ipiv = std::make_shared<std::vector<int>>(static_cast<std::size_t>(s));
      w.call = [=] { (void)getrf_pivot(s, s, *pc, *pd, *ipiv); };
      w.error = [=] {
        if (*ipiv != ref->ipiv) return 1.0;
        return oracle::max_rel_diff(to_col(*pd), ref->LU);
      };
    } else {
      w.call = [=] { (void)oracle::getrf(*C, true); };
    }
    return w;
  }

  if (routine == "gelqf") {
    w.m = w.n = s;
    auto C = std::make_shared<ColMatrix>(random_matrix(rng, s, s));
    w.operands = {{"C", *C}};
    if (hp) {
      auto ref = std::make_shared<ColMatrix>(oracle::lq_l(*C));
      auto pc = std::make_shared<PanelMatrix>(to_panel(*C));
      auto pd = std::make_shared<PanelMatrix>(allocate_panel_matrix(s, s));
      auto work = std::make_shared<std::vector<std::byte>>(gelqf_worksize(s, s) + kAlignment);
      auto span = std::make_shared<std::span<std::byte>>();
      {
        void* p = work->data();
        std::size_t space = work->size();
        std::align(kAlignment, gelqf_worksize(s, s), p, space);
        *span = std::span<std::byte>(static_cast<std::byte*>(p), gelqf_worksize(s, s));
      }
      w.call = [=] { gelqf(s, s, *pc, *pd, *span); };
      w.error = [=] { return oracle::max_rel_diff(sign_normalized(to_col(*pd)), *ref); };
    } else {
      // Unblocked Householder through the oracle is not provided; the naive
      // baseline is the Gram-matrix construction of L.
      w.call = [=] { (void)oracle::lq_l(*C); };
    }
    return w;
  }

  if (routine == "riccati" || routine == "riccati_pack") {
    const int nx = s;
    const int nu = std::max(1, s / 2);
    const int N = kRiccatiHorizon;
    w.m = nx;
    w.n = nu;
    w.k = N;
    auto rd = std::make_shared<RiccatiData>(make_riccati(rng, nx, nu, N));
    rd->P.assign(static_cast<std::size_t>(N) + 1, ColMatrix());
    rd->P[static_cast<std::size_t>(N)] = rd->data.PN;
    for (int n = N - 1; n >= 0; --n) {
      const auto i = static_cast<std::size_t>(n);
      rd->P[i] = oracle::riccati_step(rd->data.A[i], rd->data.B[i], rd->data.Q[i], rd->data.R[i], rd->data.S[i],
                                      rd->P[i + 1]);
    }
    if (hp) {
      auto stages = std::make_shared<std::vector<RiccatiStage>>(make_stages(rd->data));
      auto pn = std::make_shared<PanelMatrix>(to_panel(rd->data.PN));
      auto result = std::make_shared<RiccatiFactorization>();
      if (routine == "riccati") {
        w.call = [=] { *result = riccati_factorize(rd->data.dims, *stages, *pn); };
      } else {
        // Includes the conversion of the column-major stage data.
        w.call = [=] {
          const std::vector<RiccatiStage> st = make_stages(rd->data);
          const PanelMatrix p = to_panel(rd->data.PN);
          *result = riccati_factorize(rd->data.dims, st, p);
        };
      }
      w.error = [=] { return oracle::max_rel_diff(result->p(0), rd->P[0]); };
    } else {
      w.call = [=] {
        ColMatrix P = rd->data.PN;
        for (int n = N - 1; n >= 0; --n) {
          const auto i = static_cast<std::size_t>(n);
          P = oracle::riccati_step(rd->data.A[i], rd->data.B[i], rd->data.Q[i], rd->data.R[i], rd->data.S[i], P);
        }
      };
    }
    return w;
  }
  throw UsageError("unknown routine " + routine);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void dump(const std::string& dir, const SweepRecord& rec, const Workload& w) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, M] : w.operands) {
    const std::string file = dir + "/" + rec.routine + "_" + std::to_string(rec.m) + "_" + name + ".txt";
    write_fixture_file(file, M);
  }
}

}  // namespace

double flop_count(std::string_view routine, int m, int n, int k) {
  const double M = m, Nn = n, K = k;
  if (routine == "gemm_nt" || routine == "gemm_nn") return 2.0 * M * Nn * K;
  if (routine == "syrk_ln") return M * (M + 1.0) * K;
  if (routine == "trmm_rlnn" || routine == "trsm_rltn" || routine == "trsm_rltu" || routine == "trsm_rutn")
    return M * Nn * Nn;
  if (routine == "trsm_llnu" || routine == "trsm_lunn") return M * Nn * M;
  if (routine == "potrf_l") return M * M * M / 3.0;
  if (routine == "getrf") return 2.0 * M * M * M / 3.0;
  if (routine == "gelqf") return 2.0 * M * M * Nn - 2.0 * M * M * M / 3.0;
  if (routine == "riccati" || routine == "riccati_pack") {
    const double nt = M + Nn;
    const double stage = nt * M * M + nt * (nt + 1.0) * M + nt * nt * nt / 3.0;
    return K * stage + M * M * M / 3.0;
  }
  return 0.0;
}

std::vector<std::string> routines() {
  std::vector<std::string> out;
  for (const auto& r : table()) out.emplace_back(r.name);
  return out;
}

std::vector<std::string> impls(std::string_view routine) {
  for (const auto& r : table())
    if (routine == r.name) return r.impls;
  return {};
}

std::vector<int> size_grid(int min, int max, int step) {
  if (min < 1 || max < min || step < 1) throw UsageError("size grid needs 1 <= min <= max and step >= 1");
  std::vector<int> out;
  for (int s = min; s <= max; s += step) out.push_back(s);
  return out;
}

std::vector<SweepRecord> run_sweep(const SweepOptions& opt) {
  const auto available = impls(opt.routine);
  if (available.empty()) {
    std::string msg = "unknown routine '" + opt.routine + "'; valid routines:";
    for (const auto& r : routines()) msg += " " + r;
    throw UsageError(msg);
  }
  if (std::find(available.begin(), available.end(), opt.impl) == available.end()) {
    std::string msg = "routine '" + opt.routine + "' has no implementation '" + opt.impl + "'; valid:";
    for (const auto& i : available) msg += " " + i;
    throw UsageError(msg);
  }
  if (opt.reps < 1 || opt.warmup < 0) throw UsageError("reps must be >= 1 and warmup >= 0");

  std::vector<SweepRecord> records;
  for (const int s : opt.sizes) {
    if (s < 1) throw UsageError("sizes must be positive");
    std::mt19937_64 rng(opt.seed * 1000003u + static_cast<std::uint64_t>(s));
    Workload w = make_workload(opt.routine, opt.impl, s, rng);

    SweepRecord rec{opt.routine, opt.impl, w.m, w.n, w.k, opt.reps, 0.0, 0.0};
    w.call();
    if (w.error) {
      const double err = w.error();
      if (!(err <= kGateTolerance)) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s/%s at size %d: relative error %.3g exceeds %.1g", opt.routine.c_str(),
                      opt.impl.c_str(), s, err, kGateTolerance);
        throw CorrectnessError(buf);
      }
    }
    if (!opt.dump_dir.empty()) dump(opt.dump_dir, rec, w);

    for (int i = 0; i < opt.warmup; ++i) w.call();
    auto t0 = std::chrono::steady_clock::now();
    w.call();
    const double single = std::max(seconds_since(t0), 1e-9);
    const int batch = std::max(1, static_cast<int>(std::ceil(opt.min_sample_seconds / single)));

    std::vector<double> samples;
    for (int r = 0; r < opt.reps; ++r) {
      t0 = std::chrono::steady_clock::now();
      for (int b = 0; b < batch; ++b) w.call();
      samples.push_back(seconds_since(t0) / batch);
    }
    std::sort(samples.begin(), samples.end());
    const std::size_t h = samples.size() / 2;
    rec.seconds = samples.size() % 2 ? samples[h] : 0.5 * (samples[h - 1] + samples[h]);
    rec.seconds = std::max(rec.seconds, 1e-12);
    rec.gflops = flop_count(opt.routine, w.m, w.n, w.k) / rec.seconds / 1e9;
    records.push_back(rec);
  }
  return records;
}

void emit_csv(std::vector<SweepRecord> records, std::ostream& out) {
  std::stable_sort(records.begin(), records.end(), [](const SweepRecord& a, const SweepRecord& b) {
    return std::tie(a.routine, a.impl, a.m) < std::tie(b.routine, b.impl, b.m);
  });
  out << "routine,impl,m,n,k,seconds,gflops\n";
  char buf[128];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%.17g,%.17g", r.m, r.n, r.k, r.seconds, r.gflops);
    out << r.routine << ',' << r.impl << ',' << buf << '\n';
  }
}

std::vector<SweepRecord> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "routine,impl,m,n,k,seconds,gflops")
    throw std::runtime_error("parse_csv: missing header");
  std::vector<SweepRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    SweepRecord r;
    std::string f[7];
    for (auto& field : f)
      if (!std::getline(ls, field, ',')) throw std::runtime_error("parse_csv: short row: " + line);
    r.routine = f[0];
    r.impl = f[1];
    r.m = std::stoi(f[2]);
    r.n = std::stoi(f[3]);
    r.k = std::stoi(f[4]);
    r.seconds = std::stod(f[5]);
    r.gflops = std::stod(f[6]);
    out.push_back(r);
  }
  return out;
}

}  // namespace panella::bench
