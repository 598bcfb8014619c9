// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "gsmem/kernels/kernels.hpp"

namespace gsmem::kernels {

#ifdef GSMEM_HAS_AVX2
namespace detail {
const KernelTable& avx2_table_impl();
}

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& avx2_table() { return detail::avx2_table_impl(); }
#else
bool avx2_available() { return false; }
const KernelTable& avx2_table() { return scalar_table(); }
#endif

namespace {

const KernelTable* resolve(std::string_view name) {
  if (name == "scalar") return &scalar_table();
  if (name == "avx2") {
    if (!avx2_available())
      throw std::runtime_error("avx2 kernels are not available on this machine");
    return &avx2_table();
  }
  if (name == "auto") return avx2_available() ? &avx2_table() : &scalar_table();
  throw std::invalid_argument("unknown kernel backend: " + std::string(name));
}

const KernelTable*& active_slot() {
  static const KernelTable* slot = [] {
    const char* env = std::getenv("GSMEM_KERNELS");
    return resolve(env && *env ? env : "auto");
  }();
  return slot;
}

}  // namespace

const KernelTable& active() { return *active_slot(); }

void set_backend(std::string_view name) { active_slot() = resolve(name); }

const char* backend_name() { return active().name; }

}  // namespace gsmem::kernels
