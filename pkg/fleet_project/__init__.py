# Fleet Telemetry project
