// Copyright 2026 The qcontext Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "qcontext/born.hpp"
#include "qcontext/dense.hpp"
#include "qcontext/error.hpp"
#include "qcontext/hidden_vars.hpp"
#include "qcontext/io.hpp"
#include "qcontext/parallel.hpp"
#include "qcontext/phase_space.hpp"
#include "qcontext/poly.hpp"
#include "qcontext/simplex.hpp"
#include "qcontext/states.hpp"
#include "qcontext/zmod.hpp"
