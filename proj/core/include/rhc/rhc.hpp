/*
 Copyright 2026 The rhc-attenuation Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef RHC_RHC_HPP
#define RHC_RHC_HPP

#include "rhc/certification.hpp"
#include "rhc/constants.hpp"
#include "rhc/controller.hpp"
#include "rhc/cost.hpp"
#include "rhc/disturbance.hpp"
#include "rhc/errors.hpp"
#include "rhc/estimation.hpp"
#include "rhc/horizon_solver.hpp"
#include "rhc/minmax_solver.hpp"
#include "rhc/model.hpp"
#include "rhc/trajectory.hpp"
#include "rhc/types.hpp"

#endif // RHC_RHC_HPP
