from telemetry.metrics import EmptyTrip


class FleetError(Exception):
    """Base class for fleet server failures"""


class MalformedRecord(FleetError, ValueError):
    pass


class StorageFailure(FleetError):
    """The sample could not be made durable; it must not be acknowledged"""


class UnknownVehicle(FleetError, LookupError):

    def __init__(self, vehicle_id: str):
        self.vehicle_id = vehicle_id
        super().__init__(f'unknown vehicle {vehicle_id!r}')


class NoFixAvailable(FleetError, LookupError):

    def __init__(self, vehicle_id: str):
        self.vehicle_id = vehicle_id
        super().__init__(f'vehicle {vehicle_id!r} has no valid GPS fix')


__all__ = ['EmptyTrip', 'FleetError', 'MalformedRecord', 'NoFixAvailable', 'StorageFailure', 'UnknownVehicle']
