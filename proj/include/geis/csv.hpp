#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "geis/association.hpp"
#include "geis/cauchy.hpp"
#include "geis/grid.hpp"
#include "geis/semigroup.hpp"

namespace geis::csv {

/// Round-trip formatting used for every number written to disk.
std::string num(double v);

/// Columns x[,y],re,im.
void write_grid_function(const std::filesystem::path& path, const GridFunction& u);
/// Reads the layout of write_grid_function back onto `grid`; throws ConfigError on mismatch.
GridFunction read_grid_function(const std::filesystem::path& path, const Grid& grid);

/// Columns n,M_n,M_prime_n,omega,b,fitted_C,fitted_a (fit of M_n; empty without a fit).
void write_certificate(const std::filesystem::path& path, const GrowthCertificate& cert);

/// Columns n,t,x[,y],re_w,im_w for every `stride`-th time node of each solution.
void write_solutions(const std::filesystem::path& path, const std::vector<MildSolution>& sols,
                     std::size_t stride = 1);

/// Columns n,psi_id,re_pair,im_pair.
void write_pairings(const std::filesystem::path& path, const PairingTable& table);

/// Columns n,norm,sequence plus a JSON summary next to it.
void write_association(const std::filesystem::path& csv_path,
                       const std::filesystem::path& summary_path, const AssociationReport& r);

}  // namespace geis::csv
