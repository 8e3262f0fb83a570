"""
URL configuration for the multipoint_lab project: the admin, for browsing recorded runs.
"""
from django.contrib import admin
from django.urls import path

urlpatterns = [
    path('admin/', admin.site.urls),
]
