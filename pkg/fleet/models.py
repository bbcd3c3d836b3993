"""
Fleet models - database backend for stored telemetry samples

Used when FLEET_STORE_BACKEND=database; the default file backend keeps the
same records in per-vehicle append-only logs instead.
"""
from django.db import models


class Vehicle(models.Model):
    vehicle_id = models.CharField(max_length=100, unique=True, db_index=True)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['vehicle_id']

    def __str__(self):
        return self.vehicle_id


class SampleRecord(models.Model):
    """One acknowledged TelemetrySample; rows are never updated"""
    vehicle = models.ForeignKey(Vehicle, on_delete=models.CASCADE, related_name='samples')
    seq = models.BigIntegerField()
    timestamp = models.BigIntegerField(db_index=True, help_text="Agent clock, UTC milliseconds")
    speed_kmh = models.PositiveSmallIntegerField()
    maf_gs = models.FloatField()
    fuel_l_per_km = models.FloatField(null=True, blank=True, help_text="Null while standing still")
    cumulative_distance_km = models.FloatField()
    period_s = models.FloatField(default=1.0)

    # GPS fix, all null when the sample carries none
    lat = models.FloatField(null=True, blank=True)
    lon = models.FloatField(null=True, blank=True)
    fix_time = models.CharField(max_length=12, null=True, blank=True)
    fix_status = models.CharField(max_length=1, null=True, blank=True)

    received_at = models.BigIntegerField(help_text="Server clock, UTC milliseconds")

    class Meta:
        ordering = ['vehicle', 'seq']
        constraints = [
            models.UniqueConstraint(fields=['vehicle', 'seq'], name='unique_vehicle_seq'),
        ]

    def __str__(self):
        return f"{self.vehicle.vehicle_id}#{self.seq}"
