#ifndef QG_SPECTRAL_RESULT_HPP
#define QG_SPECTRAL_RESULT_HPP

#include <string>
#include <vector>

namespace qg {

struct SpectralEntry {
    double z = 0.0;
    int multiplicity = 1;
    double lambda = 0.0;      // source discrete eigenvalue (reduced entries)
    std::string method;       // "reduced" or "oracle"
    double residual = 0.0;    // |eta(z) - lambda| or refined sigma_min
};

struct SpectralResult {
    std::vector<SpectralEntry> entries;  // sorted by z
    double interval_a = 0.0, interval_b = 0.0;

    int total_multiplicity() const {
        int m = 0;
        for (const auto& e : entries) m += e.multiplicity;
        return m;
    }
};

}  // namespace qg

#endif
