// AVX2 variants. Compiled with -mavx2 (no FMA); each lane performs the same
// IEEE operations in the same order as the scalar reference.

#include <immintrin.h>

#include "softedge/codec.hpp"
#include "softedge/kernels.hpp"

namespace softedge::kernels {

namespace {

// Tails go through the scalar table so no shared inline helper is ever
// instantiated with AVX2 code generation.
const KernelTable& ref() noexcept { return scalar_kernels(); }

struct Consts {
  __m256d sign = _mm256_set1_pd(-0.0);
  __m256d half = _mm256_set1_pd(0.5);
  __m256d one = _mm256_set1_pd(1.0);
  __m256d zero = _mm256_setzero_pd();
  __m256d max_m = _mm256_set1_pd(kMaxSpecialMagnitude);
  __m256d max_q = _mm256_set1_pd(kMaxStandardCode);
  __m256d min_q = _mm256_set1_pd(-kMaxStandardCode);
};

inline __m256d abs_pd(__m256d v, const Consts& k) { return _mm256_andnot_pd(k.sign, v); }

// std::round: truncate, then step away from zero when the dropped fraction is >= 1/2.
// v - trunc(v) is exact for every finite double.
inline __m256d round_half_away(__m256d v, const Consts& k) {
  const __m256d t = _mm256_round_pd(v, _MM_FROUND_TO_ZERO | _MM_FROUND_NO_EXC);
  const __m256d frac = abs_pd(_mm256_sub_pd(v, t), k);
  const __m256d bump = _mm256_cmp_pd(frac, k.half, _CMP_GE_OQ);
  const __m256d away = _mm256_or_pd(_mm256_and_pd(v, k.sign), k.one);
  return _mm256_add_pd(t, _mm256_and_pd(bump, away));
}

// std::clamp(v, lo, hi): v is returned on ties, including signed zeros.
inline __m256d clamp_pd(__m256d v, __m256d lo, __m256d hi) {
  return _mm256_max_pd(lo, _mm256_min_pd(hi, v));
}

inline __m256d binary32_round_trip(__m256d v) { return _mm256_cvtps_pd(_mm256_cvtpd_ps(v)); }

struct Encoded {
  __m256d small_mask;
  __m256d large_mask;
  __m256d neg_mask;  // sign bit of x, as an all-ones/all-zeros lane mask
  __m256d m_small;
  __m256d q_medium;  // never -0
  __m256d m_large;
};

inline Encoded encode_lanes(__m256d x, const CodecParams& p, const Consts& k) {
  const __m256d ax = abs_pd(x, k);
  Encoded e;
  e.small_mask = _mm256_cmp_pd(ax, _mm256_set1_pd(p.low), _CMP_LT_OQ);
  e.large_mask = _mm256_cmp_pd(ax, _mm256_set1_pd(p.high), _CMP_GT_OQ);
  e.neg_mask = _mm256_castsi256_pd(
      _mm256_cmpgt_epi64(_mm256_setzero_si256(), _mm256_castpd_si256(x)));
  e.m_small = clamp_pd(round_half_away(_mm256_div_pd(ax, _mm256_set1_pd(p.fine_step)), k), k.zero,
                       k.max_m);
  e.q_medium = _mm256_add_pd(
      clamp_pd(round_half_away(_mm256_div_pd(x, _mm256_set1_pd(p.scale)), k), k.min_q, k.max_q),
      k.zero);
  e.m_large = clamp_pd(
      round_half_away(_mm256_div_pd(_mm256_sub_pd(ax, _mm256_set1_pd(p.high)),
                                    _mm256_set1_pd(p.coarse_step)),
                      k),
      k.zero, k.max_m);
  return e;
}

inline __m256d decode_lanes(const Encoded& e, const CodecParams& p, const Consts& k) {
  const __m256d medium = _mm256_mul_pd(e.q_medium, _mm256_set1_pd(p.scale));
  const __m256d small_mag = _mm256_mul_pd(e.m_small, _mm256_set1_pd(p.fine_step));
  const __m256d small_neg =
      _mm256_and_pd(e.neg_mask, _mm256_cmp_pd(e.m_small, k.zero, _CMP_NEQ_OQ));
  const __m256d small = _mm256_xor_pd(small_mag, _mm256_and_pd(small_neg, k.sign));
  const __m256d large_mag = _mm256_add_pd(_mm256_set1_pd(p.high),
                                          _mm256_mul_pd(e.m_large, _mm256_set1_pd(p.coarse_step)));
  const __m256d large = _mm256_xor_pd(large_mag, _mm256_and_pd(e.neg_mask, k.sign));
  __m256d out = _mm256_blendv_pd(medium, small, e.small_mask);
  return _mm256_blendv_pd(out, large, e.large_mask);
}

void fake_quant_soft_edge(std::span<const double> in, std::span<double> out,
                          const CodecParams& p) {
  const Consts k;
  std::size_t i = 0;
  for (; i + 4 <= in.size(); i += 4) {
    const Encoded e = encode_lanes(_mm256_loadu_pd(in.data() + i), p, k);
    _mm256_storeu_pd(out.data() + i, binary32_round_trip(decode_lanes(e, p, k)));
  }
  ref().fake_quant_soft_edge(in.subspan(i), out.subspan(i), p);
}

void fake_quant_int8(std::span<const double> in, std::span<double> out, const CodecParams& p) {
  const Consts k;
  const __m256d s = _mm256_set1_pd(p.scale);
  std::size_t i = 0;
  for (; i + 4 <= in.size(); i += 4) {
    const __m256d x = _mm256_loadu_pd(in.data() + i);
    const __m256d q =
        _mm256_add_pd(clamp_pd(round_half_away(_mm256_div_pd(x, s), k), k.min_q, k.max_q), k.zero);
    _mm256_storeu_pd(out.data() + i, binary32_round_trip(_mm256_mul_pd(q, s)));
  }
  ref().fake_quant_int8(in.subspan(i), out.subspan(i), p);
}

// Code byte of four lanes as int32 (0..255).
inline __m128i code_bytes(const Encoded& e, const Consts& k) {
  const __m256d sign_bit = _mm256_and_pd(e.neg_mask, _mm256_set1_pd(128.0));
  const __m256d small_neg =
      _mm256_and_pd(sign_bit, _mm256_cmp_pd(e.m_small, k.zero, _CMP_NEQ_OQ));
  const __m256d small = _mm256_add_pd(e.m_small, small_neg);
  const __m256d large = _mm256_add_pd(_mm256_add_pd(e.m_large, _mm256_set1_pd(64.0)), sign_bit);
  __m256d v = _mm256_blendv_pd(e.q_medium, small, e.small_mask);
  v = _mm256_blendv_pd(v, large, e.large_mask);
  return _mm_and_si128(_mm256_cvtpd_epi32(v), _mm_set1_epi32(0xFF));
}

void encode_soft_edge(std::span<const double> in, std::span<std::uint8_t> codes,
                      std::span<std::uint8_t> flags, const CodecParams& p) {
  const Consts k;
  std::size_t i = 0;
  for (; i + 8 <= in.size(); i += 8) {
    const Encoded lo = encode_lanes(_mm256_loadu_pd(in.data() + i), p, k);
    const Encoded hi = encode_lanes(_mm256_loadu_pd(in.data() + i + 4), p, k);
    const __m128i words = _mm_packus_epi32(code_bytes(lo, k), code_bytes(hi, k));
    _mm_storel_epi64(reinterpret_cast<__m128i*>(codes.data() + i),
                     _mm_packus_epi16(words, _mm_setzero_si128()));
    const int flag_lo = _mm256_movemask_pd(_mm256_or_pd(lo.small_mask, lo.large_mask));
    const int flag_hi = _mm256_movemask_pd(_mm256_or_pd(hi.small_mask, hi.large_mask));
    flags[i / 8] = static_cast<std::uint8_t>(flag_lo | (flag_hi << 4));
  }
  // i is a multiple of 8 here, so the tail owns whole flag bytes.
  ref().encode_soft_edge(in.subspan(i), codes.subspan(i), flags.subspan(i / 8), p);
}

inline __m256d decode_quad(__m128i signed_codes, __m128i unsigned_codes, __m128i flag_lanes,
                           const CodecParams& p, const Consts& k) {
  const __m256d medium =
      _mm256_mul_pd(_mm256_cvtepi32_pd(signed_codes), _mm256_set1_pd(p.scale));
  const __m128i m32 = _mm_and_si128(unsigned_codes, _mm_set1_epi32(0x3F));
  const __m256d m = _mm256_cvtepi32_pd(m32);
  const __m256d large_mask = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(
      _mm_cmpeq_epi32(_mm_and_si128(unsigned_codes, _mm_set1_epi32(0x40)), _mm_set1_epi32(0x40))));
  const __m256d neg_mask = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(
      _mm_cmpeq_epi32(_mm_and_si128(unsigned_codes, _mm_set1_epi32(0x80)), _mm_set1_epi32(0x80))));
  const __m256d small = _mm256_mul_pd(m, _mm256_set1_pd(p.fine_step));
  const __m256d large =
      _mm256_add_pd(_mm256_set1_pd(p.high), _mm256_mul_pd(m, _mm256_set1_pd(p.coarse_step)));
  const __m256d mag = _mm256_blendv_pd(small, large, large_mask);
  const __m256d apply_sign =
      _mm256_and_pd(neg_mask, _mm256_cmp_pd(mag, k.zero, _CMP_NEQ_OQ));
  const __m256d special = _mm256_xor_pd(mag, _mm256_and_pd(apply_sign, k.sign));
  const __m256d flag_mask = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(flag_lanes));
  return _mm256_blendv_pd(medium, special, flag_mask);
}

void decode_soft_edge(std::span<const std::uint8_t> codes, std::span<const std::uint8_t> flags,
                      std::span<double> out, const CodecParams& p) {
  const Consts k;
  const __m256i bit_select = _mm256_setr_epi32(1, 2, 4, 8, 16, 32, 64, 128);
  std::size_t i = 0;
  for (; i + 8 <= codes.size(); i += 8) {
    const __m128i raw = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(codes.data() + i));
    const __m256i s32 = _mm256_cvtepi8_epi32(raw);
    const __m256i u32 = _mm256_cvtepu8_epi32(raw);
    const __m256i f32 = _mm256_cmpeq_epi32(
        _mm256_and_si256(_mm256_set1_epi32(flags[i / 8]), bit_select), bit_select);
    const __m256d lo = decode_quad(_mm256_castsi256_si128(s32), _mm256_castsi256_si128(u32),
                                   _mm256_castsi256_si128(f32), p, k);
    const __m256d hi =
        decode_quad(_mm256_extracti128_si256(s32, 1), _mm256_extracti128_si256(u32, 1),
                    _mm256_extracti128_si256(f32, 1), p, k);
    _mm256_storeu_pd(out.data() + i, binary32_round_trip(lo));
    _mm256_storeu_pd(out.data() + i + 4, binary32_round_trip(hi));
  }
  ref().decode_soft_edge(codes.subspan(i), flags.subspan(i / 8), out.subspan(i), p);
}

double leaf_sum_squares(std::span<const double> v) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= v.size(); i += 4) {
    const __m256d x = _mm256_loadu_pd(v.data() + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(x, x));
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (; i < v.size(); ++i) lane[i % 4] += v[i] * v[i];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double leaf_sum_squared_diff(std::span<const double> a, std::span<const double> b) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= a.size(); i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    lane[i % 4] += d * d;
  }
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void ssm_scan(std::span<const double> a, std::span<const double> b, std::span<const double> c,
              std::span<double> h, std::span<const double> x, std::span<double> y) {
  const std::size_t n = h.size();
  const std::size_t vec_end = n - n % 4;
  for (std::size_t t = 0; t < x.size(); ++t) {
    const __m256d xt = _mm256_set1_pd(x[t]);
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t i = 0; i < vec_end; i += 4) {
      const __m256d hi = _mm256_add_pd(_mm256_mul_pd(_mm256_loadu_pd(a.data() + i),
                                                     _mm256_loadu_pd(h.data() + i)),
                                       _mm256_mul_pd(_mm256_loadu_pd(b.data() + i), xt));
      _mm256_storeu_pd(h.data() + i, hi);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(c.data() + i), hi));
    }
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    for (std::size_t i = vec_end; i < n; ++i) {
      h[i] = a[i] * h[i] + b[i] * x[t];
      lane[i % 4] += c[i] * h[i];
    }
    y[t] = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  }
}

constexpr KernelTable kAvx2{
    Isa::Avx2,        fake_quant_soft_edge,  fake_quant_int8,       encode_soft_edge,
    decode_soft_edge, leaf_sum_squares,      leaf_sum_squared_diff, ssm_scan,
};

}  // namespace

const KernelTable* avx2_kernel_table() noexcept { return &kAvx2; }

}  // namespace softedge::kernels
