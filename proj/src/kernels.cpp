#include "qcap/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace qcap::kernels {
namespace {

const Ops* g_forced = nullptr;

const Ops* autodetect() {
  if (const char* env = std::getenv("QCAP_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return &scalar_ops();
    if (std::strcmp(env, "avx2") == 0 && avx2_ops() && avx2_runtime_supported())
      return avx2_ops();
    // Unknown or unavailable request in the environment falls through to
    // autodetection rather than aborting a whole run.
  }
  if (avx2_ops() && avx2_runtime_supported()) return avx2_ops();
  return &scalar_ops();
}

}  // namespace

bool avx2_runtime_supported() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Ops& active() {
  if (g_forced) return *g_forced;
  static const Ops* detected = autodetect();
  return *detected;
}

void force_backend(const char* name) {
  if (std::strcmp(name, "scalar") == 0) {
    g_forced = &scalar_ops();
    return;
  }
  if (std::strcmp(name, "avx2") == 0) {
    if (!avx2_ops() || !avx2_runtime_supported())
      throw std::runtime_error("avx2 backend not available on this machine");
    g_forced = avx2_ops();
    return;
  }
  throw std::invalid_argument("unknown kernel backend: " + std::string(name));
}

}  // namespace qcap::kernels
