from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.enums import HumanPolicyKind, Objective, Region, RunStatus, Scenario, SolverKind


# ----------------------
# Instance file (native JSON)
# ----------------------
class LocationSchema(BaseModel):
    id: str = Field(min_length=1, pattern=r"^[A-Za-z0-9_]+$")
    region: Region = Region.SHARED

    model_config = ConfigDict(extra="forbid")


class ObjectSchema(BaseModel):
    id: str = Field(min_length=1, pattern=r"^[A-Za-z0-9_]+$")
    movable: bool = True

    model_config = ConfigDict(extra="forbid")


class InitSchema(BaseModel):
    placements: dict[str, str] = Field(default_factory=dict)
    gripper: str | None = None

    model_config = ConfigDict(extra="forbid")


class GoalSchema(BaseModel):
    placements: dict[str, str] = Field(default_factory=dict)

    model_config = ConfigDict(extra="forbid")


class CostSchema(BaseModel):
    near: int = Field(1, ge=0)
    far: int = Field(3, ge=0)
    # shared cells cost `near` unless set
    shared: int | None = Field(None, ge=0)

    model_config = ConfigDict(extra="forbid")


class InstanceSchema(BaseModel):
    name: str = "instance"
    locations: list[LocationSchema] = Field(min_length=1)
    objects: list[ObjectSchema] = Field(min_length=1)
    init: InitSchema
    goal: GoalSchema = Field(default_factory=GoalSchema)
    costs: CostSchema = Field(default_factory=CostSchema)
    handover: bool = Field(False, description="Human may also drop objects into shared cells")

    model_config = ConfigDict(extra="forbid")


# ----------------------
# PDDL sidecar
# ----------------------
class CapsSchema(BaseModel):
    """Which action schemas the human may use, and per-schema robot costs."""

    human_actions: list[str] = Field(default_factory=list)
    costs: dict[str, int] = Field(default_factory=dict)
    default_cost: int = Field(1, ge=0)

    model_config = ConfigDict(extra="forbid")


# ----------------------
# Runs
# ----------------------
class InstanceRef(BaseModel):
    instance: str | None = None
    pddl_domain: str | None = None
    pddl_problem: str | None = None
    caps: str | None = None

    @model_validator(mode="after")
    def check_source(self) -> "InstanceRef":
        pddl = (self.pddl_domain, self.pddl_problem)
        if self.instance is None and None in pddl:
            raise ValueError("Either an instance file or a PDDL domain and problem is required")
        if self.instance is not None and any(p is not None for p in pddl):
            raise ValueError("Give a JSON instance or PDDL files, not both")
        return self


class RunConfig(BaseModel):
    source: InstanceRef
    formula: str | None = None
    solver: SolverKind = SolverKind.SYMBOLIC_MONOLITHIC
    objective: Objective = Objective.MINMAX
    budget: int | None = Field(None, ge=0)
    seed: int = 0
    out: str = "out"
    max_states: int | None = Field(None, ge=1)
    max_vars: int | None = Field(None, ge=1)


class RunReport(BaseModel):
    instance: str
    formula: str
    solver: SolverKind
    objective: Objective
    status: RunStatus = RunStatus.OK
    feasible: bool = False
    value: int | None = None
    regret: int | None = None
    budget: int | None = None
    budget_auto: bool = False
    phase_seconds: dict[str, float] = Field(default_factory=dict)
    peak_nodes: int | None = None
    var_counts: dict[str, int] = Field(default_factory=dict)
    iterations: dict[str, int] = Field(default_factory=dict)
    sizes: dict[str, int] = Field(default_factory=dict)
    seed: int = 0
    message: str | None = None


class BenchRecord(RunReport):
    scenario: Scenario
    num_locations: int
    num_objects: int
    instance_seed: int
    budget_factor: float | None = None
    layers_identical: bool | None = None
    cooperation: dict[str, int | None] = Field(default_factory=dict)


# ----------------------
# Artifacts
# ----------------------
class StrategyEntry(BaseModel):
    state: str
    dfa_state: int
    utility: int | None = None
    best_alt: int | None = None
    action: str


class StrategyArtifact(BaseModel):
    source: InstanceRef
    formula: str
    objective: Objective
    solver: SolverKind
    budget: int | None = None
    digest: str
    value: int | None = None
    regret: int | None = None
    entries: list[StrategyEntry] = Field(default_factory=list)


class RolloutStep(BaseModel):
    state: str
    dfa_state: int
    action: str
    human_action: str
    cost: int


class RolloutTranscript(BaseModel):
    human: HumanPolicyKind
    seed: int | None = None
    steps: list[RolloutStep] = Field(default_factory=list)
    payoff: int | None = None
    accepted: bool = False
