/*
Copyright 2026 The strongsched Authors

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

#ifndef STRONGSCHED_STRONGSCHED_HPP
#define STRONGSCHED_STRONGSCHED_HPP

#include "strongsched/core.hpp"
#include "strongsched/equilibria.hpp"
#include "strongsched/errors.hpp"
#include "strongsched/experiments.hpp"
#include "strongsched/io.hpp"
#include "strongsched/measures.hpp"
#include "strongsched/rational.hpp"
#include "strongsched/schedulers.hpp"
#include "strongsched/witnesses.hpp"

#endif  // STRONGSCHED_STRONGSCHED_HPP
