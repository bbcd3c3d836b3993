"""
Fleet read API URL configuration
"""
from django.urls import path
from fleet import views

app_name = 'fleet'

urlpatterns = [
    path('vehicles', views.vehicle_list, name='vehicle_list'),
    path('vehicles/<str:vehicle_id>/samples', views.vehicle_samples, name='vehicle_samples'),
    path('vehicles/<str:vehicle_id>/summary', views.vehicle_summary, name='vehicle_summary'),
    path('vehicles/<str:vehicle_id>/position', views.vehicle_position, name='vehicle_position'),

    # Exports
    path('vehicles/<str:vehicle_id>/export.csv', views.vehicle_export, {'fmt': 'csv'}, name='vehicle_export_csv'),
    path('vehicles/<str:vehicle_id>/export.json', views.vehicle_export, {'fmt': 'json'}, name='vehicle_export_json'),
]
