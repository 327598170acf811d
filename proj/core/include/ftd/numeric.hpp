#pragma once

#include <cmath>
#include <span>

namespace ftd
{
    /// Neumaier compensated summation.
    class CompensatedSum
    {
    public:
        void add(double x)
        {
            double t = _sum + x;
            if (std::abs(_sum) >= std::abs(x))
                _comp += (_sum - t) + x;
            else
                _comp += (x - t) + _sum;
            _sum = t;
        }

        CompensatedSum &operator+=(double x)
        {
            add(x);
            return *this;
        }

        double value() const { return _sum + _comp; }

    private:
        double _sum = 0.0;
        double _comp = 0.0;
    };

    inline double compensated_sum(std::span<const double> xs)
    {
        CompensatedSum s;
        for (double x : xs)
            s.add(x);
        return s.value();
    }
}
