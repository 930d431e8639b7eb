#ifndef POA_POA_HPP
#define POA_POA_HPP

#include "poa/demand_model.hpp"
#include "poa/dynamics.hpp"
#include "poa/equilibrium.hpp"
#include "poa/errors.hpp"
#include "poa/instance_factory.hpp"
#include "poa/poa_analysis.hpp"
#include "poa/spectral_kernel.hpp"
#include "poa/types.hpp"
#include "poa/verification_oracle.hpp"

#endif  // POA_POA_HPP
