public class Answer {
    public static int countDown(int start) {
        int steps = 0;
        while (start > 0) {
            if (start % 2 == 0) {
                start = start - 2;
            } else {
                start = start - 1;
            }
            steps = steps + 1;
        }
        return steps;
    }
}
