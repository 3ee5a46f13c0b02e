"""
URL configuration for hetnet_project.
Only the admin site is served; it is used to browse recorded analysis runs.
"""

from django.contrib import admin
from django.urls import path

urlpatterns = [
    # Admin Panel
    path("admin/", admin.site.urls),
]
