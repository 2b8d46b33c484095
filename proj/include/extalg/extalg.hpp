/*
   Copyright 2026 The extalg Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef EXTALG_EXTALG_HPP
#define EXTALG_EXTALG_HPP

#include "algebra_core.hpp"
#include "arens_hoffman.hpp"
#include "averaging.hpp"
#include "cole_tower.hpp"
#include "complex_poly.hpp"
#include "errors.hpp"
#include "expr.hpp"
#include "fibration.hpp"
#include "invertible_density.hpp"
#include "json_io.hpp"
#include "log_ext.hpp"
#include "poly_resultant.hpp"
#include "scenario.hpp"

#endif  // EXTALG_EXTALG_HPP
