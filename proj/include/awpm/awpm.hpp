/*
   Copyright 2026 The awpm Authors

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

#ifndef AWPM_AWPM_HPP
#define AWPM_AWPM_HPP

#include "awpm/awac_dist.hpp"
#include "awpm/awac_seq.hpp"
#include "awpm/errors.hpp"
#include "awpm/graph.hpp"
#include "awpm/matching_init.hpp"
#include "awpm/matrix_io.hpp"
#include "awpm/oracle.hpp"
#include "awpm/pipeline.hpp"

#endif  // AWPM_AWPM_HPP
