import load_env  # Load .env file
from auvdocking.default_config import DEFAULT_CONFIG
from auvdocking.graph.docking_graph import DockingSimulation
from auvdocking.models.scenario import CurrentParams, DetectorKind, Scenario, WaterModel

# Create a custom config
config = DEFAULT_CONFIG.copy()
config["progress"] = False
config["results_dir"] = "./results/example"

# Clear water, brightest-pixel detector, 0.1 m/s cross current
scenario = Scenario(
    name="example",
    detector=DetectorKind.BP,
    water=WaterModel.jerlov("IC"),
    current=CurrentParams(speed=0.1, direction="perpendicular"),
)

sim = DockingSimulation(scenario, config=config)
result = sim.run_episode(seed=7, trajectory_path="./results/example/episode_7.jsonl")
print(result.reason.value, result.attempts, f"{result.duration_s:.1f}s")
