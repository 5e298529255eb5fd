// Brute-force reference computations for the fixture values. Everything in
// this header works by explicit path enumeration or direct diagonalization
// on raw arrays, independent of the library's circuit machinery, so it can
// serve as an oracle for it.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <string>

namespace oracles {

using C = std::complex<double>;

// 50/50 splitter amplitude between input arm `in` and output arm `out`
// (0 and 1): straight-through 1/sqrt(2), cross i/sqrt(2).
inline C bs(int in, int out) {
  const double rt = 1.0 / std::sqrt(2.0);
  return in == out ? C(rt, 0.0) : C(0.0, rt);
}

// ----- crossed interferometers (photon x particle meeting at W) ----------
//
// Photon enters its arm 0 (upper), particle its arm 1 (lower). Photon arm 1
// crosses particle arm 0 at W; paths that co-occupy W annihilate. Exit
// conventions after the second splitters: photon D1 = arm 1, D2 = arm 0;
// particle D1 = arm 0, D2 = arm 1.

struct CrossedResult {
  double p_final[2][2] = {};  // |amplitude|^2 by (photon exit arm, particle exit arm)
  double p_annihilation = 0.0;
};

inline CrossedResult crossed_interferometers() {
  CrossedResult r;
  C amp[2][2] = {};
  C ann = 0.0;
  for (int pa = 0; pa < 2; ++pa) {
    for (int ra = 0; ra < 2; ++ra) {
      const C w = bs(0, pa) * bs(1, ra);
      if (pa == 1 && ra == 0) {
        ann += w;
        continue;
      }
      for (int pf = 0; pf < 2; ++pf)
        for (int rf = 0; rf < 2; ++rf) amp[pf][rf] += w * bs(pa, pf) * bs(ra, rf);
    }
  }
  for (int pf = 0; pf < 2; ++pf)
    for (int rf = 0; rf < 2; ++rf) r.p_final[pf][rf] = std::norm(amp[pf][rf]);
  r.p_annihilation = std::norm(ann);
  return r;
}

enum class CrossedProbe { particle_at_w, photon_at_w, both_at_w };

// Joint probability of (probe fires, both D2 click) and of (probe fires at
// all) with a projective check inserted right after the meeting; branches
// decohere, so each branch's amplitudes sum separately.
struct CrossedConditional {
  double p_joint_yes_bothd2 = 0.0;  // probe branch ends in both-D2
  double p_joint_no_bothd2 = 0.0;   // complementary branch ends in both-D2
};

inline CrossedConditional crossed_conditional(CrossedProbe probe) {
  CrossedConditional out;
  C amp_yes[2][2] = {}, amp_no[2][2] = {};
  for (int pa = 0; pa < 2; ++pa) {
    for (int ra = 0; ra < 2; ++ra) {
      const C w = bs(0, pa) * bs(1, ra);
      if (pa == 1 && ra == 0) continue;  // annihilated: reaches no detector
      bool yes = false;
      if (probe == CrossedProbe::particle_at_w) yes = (ra == 0);
      if (probe == CrossedProbe::photon_at_w) yes = (pa == 1);
      if (probe == CrossedProbe::both_at_w) yes = (pa == 1 && ra == 0);
      C (*amp)[2] = yes ? amp_yes : amp_no;
      for (int pf = 0; pf < 2; ++pf)
        for (int rf = 0; rf < 2; ++rf) amp[pf][rf] += w * bs(pa, pf) * bs(ra, rf);
    }
  }
  out.p_joint_yes_bothd2 = std::norm(amp_yes[0][1]);  // photon exit 0 = D2, particle exit 1 = D2
  out.p_joint_no_bothd2 = std::norm(amp_no[0][1]);
  return out;
}

// ----- localization of a spread-out particle ------------------------------
//
// Photon enters arm 0 (right); arm 1 (left) crosses the particle's "in"
// position (index 0 of {in, out}). Meeting consumes both. Photon D2 = exit
// arm 0, D1 = exit arm 1.

struct LocalizeResult {
  double p_d1 = 0.0, p_d2 = 0.0, p_absorbed = 0.0;
  double p_d2_particle_in = 0.0;      // joint: D2 and particle at "in"
  double p_joint_left_d2 = 0.0;       // photon-position probe after meeting: left branch to D2
  double p_joint_right_d2 = 0.0;      // right branch to D2
};

inline LocalizeResult localize_particle() {
  LocalizeResult r;
  const double rt = 1.0 / std::sqrt(2.0);
  C amp[2][2] = {};       // (photon exit, particle position)
  C amp_left[2][2] = {};  // decohered branches of the inserted photon probe
  C amp_right[2][2] = {};
  C absorbed = 0.0;
  for (int pa = 0; pa < 2; ++pa) {
    for (int rp = 0; rp < 2; ++rp) {  // particle position: 0 in, 1 out
      const C w = bs(0, pa) * C(rt, 0.0);
      if (pa == 1 && rp == 0) {
        absorbed += w;
        continue;
      }
      for (int pf = 0; pf < 2; ++pf) {
        const C a = w * bs(pa, pf);
        amp[pf][rp] += a;
        (pa == 1 ? amp_left : amp_right)[pf][rp] += a;
      }
    }
  }
  for (int rp = 0; rp < 2; ++rp) {
    r.p_d2 += std::norm(amp[0][rp]);
    r.p_d1 += std::norm(amp[1][rp]);
    r.p_joint_left_d2 += std::norm(amp_left[0][rp]);
    r.p_joint_right_d2 += std::norm(amp_right[0][rp]);
  }
  r.p_absorbed = std::norm(absorbed);
  r.p_d2_particle_in = std::norm(amp[0][0]);
  return r;
}

// ----- direct diagonalization ---------------------------------------------

// Cyclic Jacobi rotations on a small real symmetric matrix; returns the
// eigenvalue/eigenvector pair with the smallest eigenvalue.
template <std::size_t N>
inline std::pair<double, std::array<double, N>> jacobi_ground(std::array<std::array<double, N>, N> a) {
  std::array<std::array<double, N>, N> v{};
  for (std::size_t i = 0; i < N; ++i) v[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < N; ++p)
      for (std::size_t q = p + 1; q < N; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < N; ++p) {
      for (std::size_t q = p + 1; q < N; ++q) {
        if (std::abs(a[p][q]) < 1e-18) continue;
        const double theta = 0.5 * std::atan2(2.0 * a[p][q], a[q][q] - a[p][p]);
        const double c = std::cos(theta), s = std::sin(theta);
        for (std::size_t k = 0; k < N; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < N; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < N; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::size_t ground = 0;
  for (std::size_t i = 1; i < N; ++i)
    if (a[i][i] < a[ground][ground]) ground = i;
  std::array<double, N> vec{};
  for (std::size_t k = 0; k < N; ++k) vec[k] = v[k][ground];
  return {a[ground][ground], vec};
}

}  // namespace oracles
