#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace statmech {

//! Seed used whenever the caller does not supply one.
inline constexpr std::uint64_t kDefaultSeed = 1729;

//! Reproducible random source.
//!
//! The engine is std::mt19937_64, whose output sequence is fixed by the C++
//! standard. The std:: distributions are implementation-defined, so the
//! conversions to doubles, normals and bounded integers are done here; the
//! same seed therefore gives the same stream on every platform.
class Rng
{
public:
    explicit Rng(std::uint64_t seed = kDefaultSeed) : m_Engine(seed) {}

    std::uint64_t next() { return m_Engine(); }

    //! Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(m_Engine() >> 11) * 0x1.0p-53; }

    //! Uniform integer in [0, n), unbiased.
    std::uint64_t below(std::uint64_t n)
    {
        std::uint64_t limit = (~std::uint64_t{0}) - (~std::uint64_t{0}) % n;
        std::uint64_t r;
        do {
            r = m_Engine();
        } while (r >= limit);
        return r % n;
    }

    //! Standard normal via the Marsaglia polar method.
    double normal()
    {
        if (m_HasSpare) {
            m_HasSpare = false;
            return m_Spare;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        double scale = std::sqrt(-2.0 * std::log(s) / s);
        m_Spare = v * scale;
        m_HasSpare = true;
        return u * scale;
    }

private:
    std::mt19937_64 m_Engine;
    double m_Spare = 0.0;
    bool m_HasSpare = false;
};

} // namespace statmech
