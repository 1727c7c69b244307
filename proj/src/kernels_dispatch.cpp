// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pacing/kernels.hpp"

#include "pacing/errors.hpp"

namespace pacing {

namespace {
KernelKind g_override = KernelKind::kAuto;
}  // namespace

#if !defined(PACING_HAVE_AVX2)
const KernelOps* avx2_kernels() { return nullptr; }
#endif

bool avx2_supported() {
#if defined(PACING_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

void set_kernel_override(KernelKind kind) { g_override = kind; }

KernelKind kernel_override() { return g_override; }

KernelKind kernel_kind_from_string(const std::string& name) {
  if (name == "auto") return KernelKind::kAuto;
  if (name == "scalar") return KernelKind::kScalar;
  if (name == "avx2") return KernelKind::kAvx2;
  throw ConfigError("unknown kernel '" + name +
                    "' (choices: auto, scalar, avx2)");
}

const KernelOps& kernel_ops(KernelKind kind) {
  if (kind == KernelKind::kAuto) kind = g_override;
  if (kind == KernelKind::kAuto) {
    kind = avx2_supported() ? KernelKind::kAvx2 : KernelKind::kScalar;
  }
  if (kind == KernelKind::kAvx2) {
    if (!avx2_supported()) {
      throw ConfigError("avx2 kernels are not available on this build/CPU");
    }
    return *avx2_kernels();
  }
  return scalar_kernels();
}

}  // namespace pacing
