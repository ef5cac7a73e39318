#pragma once

#include <string>

#include "sfac/diagnostics.hpp"
#include "sfac/isotropic.hpp"
#include "sfac/keyvalue.hpp"
#include "sfac/spectral.hpp"

namespace sfac {

/// `k,[k1,...,kd,]s_hat` plus `<path>.meta` with the estimate metadata.
void save_estimate(const std::string& path, const SpectralEstimate& e);
SpectralEstimate load_estimate(const std::string& path);

/// `k_bin,mean,std,count`.
void save_bins(const std::string& path, const SpectralEstimate& e);

/// `r,g_hat`.
void save_pcf(const std::string& path, const PcfEstimate& e);
PcfEstimate load_pcf(const std::string& path);

KeyValue to_keyvalue(const TestReport& r);
TestReport test_report_from_keyvalue(const KeyValue& kv);

}  // namespace sfac
