/*
 * Oracle implementation: FD assembly, LAPACK-backed decompositions, the
 * spectral propagator, factored reference solutions with memo + disk cache,
 * and the restriction error metric.
 */
#include "oneway/oracle.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "oneway/errors.hpp"

extern "C" {
void dgemm_(const char* transa, const char* transb, const int* m, const int* n,
            const int* k, const double* alpha, const double* a, const int* lda,
            const double* b, const int* ldb, const double* beta, double* c,
            const int* ldc);
void dgemv_(const char* trans, const int* m, const int* n, const double* alpha,
            const double* a, const int* lda, const double* x, const int* incx,
            const double* beta, double* y, const int* incy);
}

namespace oneway {

namespace {

constexpr int kReferenceGuard = 8191;
constexpr int kCacheVectorLimit = 2048;
constexpr char kCacheMagic[8] = {'O', 'W', 'S', 'P', 'E', 'C', '1', '\0'};
constexpr std::uint8_t kCacheVersion = 1;

std::vector<double> serialize_key(const PiecewiseWavenumber& pw, int N) {
    // reused for hashing and the key echo; ints are widened to doubles only
    // for the hash stream, the file writes them as int32
    std::vector<double> key;
    key.push_back(static_cast<double>(pw.pieces()));
    key.insert(key.end(), pw.alphas.begin(), pw.alphas.end());
    key.push_back(static_cast<double>(pw.rhos.size()));
    key.insert(key.end(), pw.rhos.begin(), pw.rhos.end());
    key.push_back(static_cast<double>(N));
    return key;
}

std::uint64_t fnv1a(const void* data, std::size_t len) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    std::uint64_t h = 14695981039346656037ULL;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

template <typename T>
void write_raw(std::ofstream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
bool read_raw(std::ifstream& is, T* v) {
    is.read(reinterpret_cast<char*>(v), sizeof(T));
    return is.good();
}

struct MemoSlot {
    std::vector<double> alphas, rhos;
    int N = -1;
    std::shared_ptr<const DenseEig> eig;
};
std::mutex g_memo_mutex;
MemoSlot g_memo;

std::shared_ptr<const DenseEig> get_fd_decomposition(const PiecewiseWavenumber& pw,
                                                     int N,
                                                     const std::string& cache_dir) {
    std::lock_guard<std::mutex> lock(g_memo_mutex);
    if (g_memo.N == N && g_memo.alphas == pw.alphas && g_memo.rhos == pw.rhos)
        return g_memo.eig;

    auto eig = std::make_shared<DenseEig>();
    bool loaded = false;
    if (!cache_dir.empty() && cache_load(cache_dir, pw, N, eig.get()) &&
        eig->vectors.size() ==
            static_cast<std::size_t>(N) * static_cast<std::size_t>(N))
        loaded = true;
    if (!loaded) {
        *eig = dense_eig(fd_matrix(pw, N));
        if (!cache_dir.empty()) cache_store(cache_dir, pw, N, *eig);
    }
    g_memo = {pw.alphas, pw.rhos, N, eig};
    return eig;
}

}  // namespace

// ---------------------------------------------------------------------------
// FD assembly and decompositions
// ---------------------------------------------------------------------------

FdMatrix fd_matrix(const PiecewiseWavenumber& pw, int N) {
    validate(pw);
    if (N < 3) throw std::invalid_argument("fd_matrix: N must be >= 3");
    FdMatrix A;
    A.N = N;
    A.h = kPi / (N + 1);
    A.off = 1.0 / (A.h * A.h);
    A.diag.resize(static_cast<std::size_t>(N));
    const int n = pw.pieces();
    for (int i = 1; i <= N; ++i) {
        const double z = i * A.h;
        const double a = z - 0.5 * A.h, b = z + 0.5 * A.h;
        double q = 0.0;
        for (int v = 0; v < n; ++v) {
            const double lo = std::max(a, pw.boundary(v));
            const double hi = std::min(b, pw.boundary(v + 1));
            if (hi > lo)
                q += pw.alphas[static_cast<std::size_t>(v)] *
                     pw.alphas[static_cast<std::size_t>(v)] * (hi - lo);
        }
        A.diag[static_cast<std::size_t>(i - 1)] = -2.0 / (A.h * A.h) + q / A.h;
    }
    return A;
}

DenseEig dense_eig(const std::vector<double>& a, int N) {
    if (static_cast<std::size_t>(N) * static_cast<std::size_t>(N) != a.size())
        throw std::invalid_argument("dense_eig: size mismatch");
    double amax = 0.0;
    for (double x : a) amax = std::max(amax, std::abs(x));
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j)
            if (std::abs(a[static_cast<std::size_t>(i) * N + j] -
                         a[static_cast<std::size_t>(j) * N + i]) >
                1e-10 * std::max(1.0, amax))
                throw NotSymmetric();

    DenseEig eig;
    eig.N = N;
    eig.vectors = a;  // overwritten in place by the driver
    eig.values.resize(static_cast<std::size_t>(N));
    const lapack_int info =
        LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', N, eig.vectors.data(), N,
                       eig.values.data());
    if (info != 0) throw NoConvergence("dense_eig(dsyevd)");
    return eig;
}

DenseEig dense_eig(const FdMatrix& A) {
    const int N = A.N;
    std::vector<double> d = A.diag;
    std::vector<double> e(static_cast<std::size_t>(N), 0.0);  // dstemr wants n slots
    std::fill(e.begin(), e.begin() + (N - 1), A.off);

    DenseEig eig;
    eig.N = N;
    eig.values.resize(static_cast<std::size_t>(N));
    eig.vectors.resize(static_cast<std::size_t>(N) * static_cast<std::size_t>(N));
    std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(N));
    lapack_int found = 0;
    lapack_logical tryrac = 1;
    const lapack_int info = LAPACKE_dstemr(
        LAPACK_COL_MAJOR, 'V', 'A', N, d.data(), e.data(), 0.0, 0.0, 0, 0, &found,
        eig.values.data(), eig.vectors.data(), N, N, isuppz.data(), &tryrac);
    if (info != 0 || found != N) throw NoConvergence("dense_eig(dstemr)");
    return eig;
}

std::vector<double> fd_top_eigenvalues(const PiecewiseWavenumber& pw, int N, int k) {
    if (k < 1 || k > N) throw std::invalid_argument("fd_top_eigenvalues: bad k");
    const FdMatrix A = fd_matrix(pw, N);
    std::vector<double> d = A.diag;
    std::vector<double> e(static_cast<std::size_t>(N - 1), A.off);
    double z_dummy = 0.0;
    const lapack_int info =
        LAPACKE_dstevd(LAPACK_COL_MAJOR, 'N', N, d.data(), e.data(), &z_dummy, 1);
    if (info != 0) throw NoConvergence("fd_top_eigenvalues(dstevd)");
    std::vector<double> top(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
        top[static_cast<std::size_t>(i)] = d[static_cast<std::size_t>(N - 1 - i)];
    return top;
}

// ---------------------------------------------------------------------------
// propagation
// ---------------------------------------------------------------------------

std::vector<cplx> spectral_propagator(const DenseEig& eig, double r, int sign) {
    const int N = eig.N;
    const std::size_t sz = static_cast<std::size_t>(N) * static_cast<std::size_t>(N);
    std::vector<double> qd_re(sz), qd_im(sz), p_re(sz), p_im(sz);
    for (int k = 0; k < N; ++k) {
        const cplx c = propagator_factor(eig.values[static_cast<std::size_t>(k)], r, sign);
        const double* qcol = eig.vectors.data() + static_cast<std::size_t>(k) * N;
        double* dre = qd_re.data() + static_cast<std::size_t>(k) * N;
        double* dim = qd_im.data() + static_cast<std::size_t>(k) * N;
        for (int i = 0; i < N; ++i) {
            dre[i] = qcol[i] * c.real();
            dim[i] = qcol[i] * c.imag();
        }
    }
    const double one = 1.0, zero = 0.0;
    dgemm_("N", "T", &N, &N, &N, &one, qd_re.data(), &N, eig.vectors.data(), &N,
           &zero, p_re.data(), &N);
    dgemm_("N", "T", &N, &N, &N, &one, qd_im.data(), &N, eig.vectors.data(), &N,
           &zero, p_im.data(), &N);
    std::vector<cplx> P(sz);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            P[static_cast<std::size_t>(i) * N + j] =
                cplx(p_re[static_cast<std::size_t>(j) * N + i],
                     p_im[static_cast<std::size_t>(j) * N + i]);
    return P;
}

std::vector<GridSolution> reference_solve_multi(const PiecewiseWavenumber& pw,
                                                const InitialCondition& f, int N_ref,
                                                const std::vector<double>& rs,
                                                const std::string& cache_dir,
                                                int sign) {
    if (N_ref < 3) throw std::invalid_argument("reference_solve: N_ref must be >= 3");
    if (N_ref > kReferenceGuard)
        throw std::invalid_argument("reference_solve: N_ref above the 8191 memory guard");
    const auto eig = get_fd_decomposition(pw, N_ref, cache_dir);
    const int N = N_ref;
    const double h = kPi / (N + 1);

    std::vector<double> fvec(static_cast<std::size_t>(N));
    for (int i = 1; i <= N; ++i)
        fvec[static_cast<std::size_t>(i - 1)] = f.eval(i * h);

    const double one = 1.0, zero = 0.0;
    const int inc = 1;
    std::vector<double> c(static_cast<std::size_t>(N));
    dgemv_("T", &N, &N, &one, eig->vectors.data(), &N, fvec.data(), &inc, &zero,
           c.data(), &inc);

    std::vector<GridSolution> out;
    out.reserve(rs.size());
    std::vector<double> g_re(static_cast<std::size_t>(N)), g_im(static_cast<std::size_t>(N));
    std::vector<double> u_re(static_cast<std::size_t>(N)), u_im(static_cast<std::size_t>(N));
    for (double r : rs) {
        for (int k = 0; k < N; ++k) {
            const cplx fac =
                propagator_factor(eig->values[static_cast<std::size_t>(k)], r, sign);
            g_re[static_cast<std::size_t>(k)] = c[static_cast<std::size_t>(k)] * fac.real();
            g_im[static_cast<std::size_t>(k)] = c[static_cast<std::size_t>(k)] * fac.imag();
        }
        dgemv_("N", &N, &N, &one, eig->vectors.data(), &N, g_re.data(), &inc, &zero,
               u_re.data(), &inc);
        dgemv_("N", &N, &N, &one, eig->vectors.data(), &N, g_im.data(), &inc, &zero,
               u_im.data(), &inc);
        GridSolution sol;
        sol.N = N;
        sol.r = r;
        sol.values.resize(static_cast<std::size_t>(N));
        for (int i = 0; i < N; ++i)
            sol.values[static_cast<std::size_t>(i)] =
                cplx(u_re[static_cast<std::size_t>(i)], u_im[static_cast<std::size_t>(i)]);
        out.push_back(std::move(sol));
    }
    return out;
}

GridSolution reference_solve(const PiecewiseWavenumber& pw, const InitialCondition& f,
                             int N_ref, double r, const std::string& cache_dir,
                             int sign) {
    return reference_solve_multi(pw, f, N_ref, {r}, cache_dir, sign)[0];
}

double relative_error(const GridSolution& candidate, const GridSolution& reference) {
    if ((reference.N + 1) % (candidate.N + 1) != 0)
        throw IncompatibleGrids(candidate.N, reference.N);
    const int stride = (reference.N + 1) / (candidate.N + 1);
    double num = 0.0, den = 0.0;
    for (int i = 1; i <= candidate.N; ++i) {
        const cplx ref = reference.values[static_cast<std::size_t>(stride * i - 1)];
        den = std::max(den, std::abs(ref));
        num = std::max(num,
                       std::abs(ref - candidate.values[static_cast<std::size_t>(i - 1)]));
    }
    if (den == 0.0)
        throw std::invalid_argument("relative_error: reference vanishes on the grid");
    return num / den;
}

// ---------------------------------------------------------------------------
// disk cache
// ---------------------------------------------------------------------------

std::string cache_file_name(const PiecewiseWavenumber& pw, int N) {
    const auto key = serialize_key(pw, N);
    const std::uint64_t h = fnv1a(key.data(), key.size() * sizeof(double));
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx.owspec",
                  static_cast<unsigned long long>(h));
    return buf;
}

void cache_store(const std::string& dir, const PiecewiseWavenumber& pw, int N,
                 const DenseEig& eig) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const fs::path final_path = fs::path(dir) / cache_file_name(pw, N);
    const fs::path tmp_path = final_path.string() + ".tmp";
    {
        std::ofstream os(tmp_path, std::ios::binary | std::ios::trunc);
        if (!os) return;  // cache is best-effort
        os.write(kCacheMagic, sizeof(kCacheMagic));
        write_raw(os, kCacheVersion);
        const std::uint8_t has_vectors = (N <= kCacheVectorLimit) ? 1 : 0;
        write_raw(os, has_vectors);
        const std::int32_t n = pw.pieces(), nr = static_cast<std::int32_t>(pw.rhos.size());
        write_raw(os, n);
        for (double a : pw.alphas) write_raw(os, a);
        write_raw(os, nr);
        for (double r : pw.rhos) write_raw(os, r);
        const std::int32_t n32 = N;
        write_raw(os, n32);
        os.write(reinterpret_cast<const char*>(eig.values.data()),
                 static_cast<std::streamsize>(eig.values.size() * sizeof(double)));
        if (has_vectors)
            os.write(reinterpret_cast<const char*>(eig.vectors.data()),
                     static_cast<std::streamsize>(eig.vectors.size() * sizeof(double)));
        if (!os) return;
    }
    std::error_code ec;
    fs::rename(tmp_path, final_path, ec);
}

bool cache_load(const std::string& dir, const PiecewiseWavenumber& pw, int N,
                DenseEig* out) {
    namespace fs = std::filesystem;
    const fs::path path = fs::path(dir) / cache_file_name(pw, N);
    std::ifstream is(path, std::ios::binary);
    if (!is) return false;

    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kCacheMagic, sizeof(magic)) != 0) return false;
    std::uint8_t version = 0, has_vectors = 0;
    if (!read_raw(is, &version) || version != kCacheVersion) return false;
    if (!read_raw(is, &has_vectors)) return false;

    std::int32_t n = 0;
    if (!read_raw(is, &n) || n != pw.pieces()) return false;
    for (double expect : pw.alphas) {
        double a = 0.0;
        if (!read_raw(is, &a) || a != expect) return false;
    }
    std::int32_t nr = 0;
    if (!read_raw(is, &nr) || nr != static_cast<std::int32_t>(pw.rhos.size()))
        return false;
    for (double expect : pw.rhos) {
        double r = 0.0;
        if (!read_raw(is, &r) || r != expect) return false;
    }
    std::int32_t n32 = 0;
    if (!read_raw(is, &n32) || n32 != N) return false;

    out->N = N;
    out->values.resize(static_cast<std::size_t>(N));
    is.read(reinterpret_cast<char*>(out->values.data()),
            static_cast<std::streamsize>(out->values.size() * sizeof(double)));
    if (!is) return false;
    out->vectors.clear();
    if (has_vectors) {
        out->vectors.resize(static_cast<std::size_t>(N) * static_cast<std::size_t>(N));
        is.read(reinterpret_cast<char*>(out->vectors.data()),
                static_cast<std::streamsize>(out->vectors.size() * sizeof(double)));
        if (!is) return false;
    }
    return true;
}

}  // namespace oneway
